#pragma once

#include "mpstm/hamiltonian.hpp"
#include "mpstm/uniform_mps.hpp"

#include <cstdint>
#include <vector>

namespace mpstm {

struct TrotterStage {
    double dt     = 0.1;
    int    sweeps = 1000; // budget
    double tol    = 1e-10; // stop when |dE| / dt per sweep drops below tol
};

struct ItebdOptions {
    std::vector<TrotterStage> schedule{{0.1, 4000, 1e-10}, {0.01, 20000, 1e-10}, {0.001, 100000, 1e-10}};
    /// Start from this product state when non-empty, otherwise from a random D-dimensional state.
    Vec           initial;
    std::uint64_t seed            = 1;
    bool          record_history  = false;
    /// Schmidt values below this fraction of the largest are discarded.
    double        svd_cutoff      = 1e-13;
    /// Relative gap below which Schmidt values at the truncation edge count as one block.
    double        degeneracy_tol  = 1e-9;
};

struct StageReport {
    double dt        = 0;
    int    sweeps    = 0;
    double drift     = 0; // last |dE| / dt
    bool   converged = false;
};

struct ItebdResult {
    UniformMps               mps;    // one-site uniform, mixed gauge
    double                   energy = 0;
    std::vector<StageReport> stages;
    std::vector<double>      history; // energy per sweep (if requested)
    double                   symmetrization_overlap = 1; // |dominant eigenvalue| linking the sublattices
};

/// Imaginary-time evolution with second-order Trotter steps on an A/B unit cell, followed by
/// symmetrization into a one-site uniform state. Throws ConvergenceError if the last stage
/// exhausts its budget, InvalidArgument if the converged state is not one-site invariant.
[[nodiscard]] ItebdResult itebd_ground_state(const TwoSiteHamiltonian &h, Eigen::Index D, const ItebdOptions &opt = {});

/// exp(-tau h) for Hermitian h.
[[nodiscard]] Mat imaginary_time_gate(const Mat &h, double tau);

} // namespace mpstm
