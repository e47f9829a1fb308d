#pragma once

#include "mpstm/hamiltonian.hpp"
#include "mpstm/itebd.hpp"
#include "mpstm/uniform_mps.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpstm::cli {

/// Validation failure; `what()` lists every problem, one per line, with line numbers where known.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parsed YAML document plus the settings every subcommand shares.
///
/// Grammar (YAML mapping, all keys lower case):
///   model:    {name: XY|XXZ|BLBQ|FIELD_ONLY, params: [..]}
///   D:        int or list of ints
///   state:    path to a saved .umps file (replaces model + D for analysis commands)
///   itebd:    {initial: [..], schedule: [[dt, sweeps, tol], ..]}
///   seed:     unsigned 64-bit
///   spectrum: {kind: regular|mixed, m: int, symmetry: rot_x|rot_y|rot_z}
///   operators:{A: name, B: name, O: name}   names sx, sy, sz for the local spin (d - 1)/2
///   corr:     {n_max: int}
///   kgrid:    {n: int}
///   ozfit:    {m: int, branch: int}
///   filter:   {k: [..], ell_max: int, ratio: double, fit: [l_min, l_max]}
///   peps:     {lattice: square|hexagonal, ny: [..], twist: [..], m: int}
///   oracle:   {kind: xy|ed, L: int, k: [..]}
///   accept:   {only: [ids], cache: dir}
class RunConfig {
  public:
    static RunConfig from_file(const std::string &path);
    static RunConfig from_string(const std::string &text, const std::string &origin = "<string>");

    /// Throws ConfigError naming all missing keys for `command`.
    void validate(const std::string &command) const;

    [[nodiscard]] const YAML::Node &root() const { return root_; }
    [[nodiscard]] bool              has(const std::string &dotted) const;
    [[nodiscard]] YAML::Node        at(const std::string &dotted) const;

    template<class T> [[nodiscard]] T get(const std::string &dotted) const;
    template<class T> [[nodiscard]] T get_or(const std::string &dotted, T fallback) const {
        return has(dotted) ? get<T>(dotted) : fallback;
    }

    [[nodiscard]] std::vector<int> int_list(const std::string &dotted) const;

    [[nodiscard]] TwoSiteHamiltonian hamiltonian() const;
    [[nodiscard]] ItebdOptions       itebd_options(std::uint64_t seed) const;
    [[nodiscard]] Mat                operator_matrix(const std::string &key, int d) const;

    /// SHA-256 (hex) of the canonical emission of the document and the effective seed.
    [[nodiscard]] std::string hash(std::uint64_t seed) const;

    [[nodiscard]] const std::string &origin() const { return origin_; }

  private:
    YAML::Node  root_;
    std::string origin_;

    [[nodiscard]] std::string where(const YAML::Node &n) const;
};

template<class T> T RunConfig::get(const std::string &dotted) const {
    const YAML::Node n = at(dotted);
    try {
        return n.as<T>();
    } catch(const YAML::Exception &) {
        throw ConfigError(origin_ + where(n) + ": key '" + dotted + "' has the wrong type");
    }
}

} // namespace mpstm::cli
