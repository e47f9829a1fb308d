#pragma once

#include "mpstm/hamiltonian.hpp"
#include "mpstm/itebd.hpp"
#include "mpstm/uniform_mps.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace mpstm::accept {

struct CriterionResult {
    std::string id;
    std::string title;
    double      measured  = 0;
    double      target    = 0;
    double      tolerance = 0;
    bool        pass      = false;
    std::string detail;
    double      seconds = 0;
};

/// Ground states shared between criteria; optionally persisted under `dir` so reruns skip iTEBD.
class StateCache {
  public:
    explicit StateCache(std::string dir = {}) : dir_(std::move(dir)) {}
    /// iTEBD ground state of `h` at bond dimension D. `tag` distinguishes initial-state choices.
    const UniformMps &ground_state(const TwoSiteHamiltonian &h, Eigen::Index D, const ItebdOptions &opt, const std::string &tag);

  private:
    std::string                       dir_;
    std::map<std::string, UniformMps> mem_;
};

struct AcceptanceOptions {
    std::vector<std::string> only;            // criterion ids; empty runs all
    std::string              cache_dir;       // empty disables the on-disk state cache
    std::uint64_t            seed = 20240611; // random-state draws of A4 / A5
    std::function<void(const CriterionResult &)> on_result;
};

using Criterion = std::function<CriterionResult(StateCache &, const AcceptanceOptions &)>;

/// Criteria A1 .. A10 in order.
[[nodiscard]] const std::vector<std::pair<std::string, Criterion>> &criteria();

[[nodiscard]] std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &opt);

/// "A3 FAIL measured=... target=... tol=... (detail)"
[[nodiscard]] std::string format_result(const CriterionResult &r);

/// Criterion-by-criterion JSON report.
[[nodiscard]] std::string json_report(const std::vector<CriterionResult> &results);

} // namespace mpstm::accept
