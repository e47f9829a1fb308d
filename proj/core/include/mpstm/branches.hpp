#pragma once

#include "mpstm/spectrum.hpp"

#include <vector>

namespace mpstm {

/// Eigenvalues sharing (approximately) one phase.
struct Branch {
    double                    phi   = 0; // circular mean of member phases
    std::vector<Eigen::Index> members;   // spectrum indices, ascending eps
    double                    delta = 0; // smallest member eps
    int                       partner = -1; // index of the mirror branch at -phi, if any

    [[nodiscard]] std::size_t count() const { return members.size(); }
};

inline constexpr double kDefaultPhaseTol = 0.02 * pi;

/// Single-linkage clustering of eigenvalue phases on the circle. Only eigenvalues with
/// eps <= eps_cut take part; the dominant eigenvalue of a regular spectrum is skipped.
/// Branches are sorted by delta ascending, ties by phi ascending.
[[nodiscard]] std::vector<Branch> cluster_branches(const TmSpectrum &spec, double phase_tol = kDefaultPhaseTol,
                                                   double eps_cut = std::numeric_limits<double>::infinity());

/// Clustering on raw (eps, phi) data; `skip` lists indices to leave out.
[[nodiscard]] std::vector<Branch> cluster_phases(const RVec &eps, const RVec &phi, double phase_tol, double eps_cut,
                                                 const std::vector<Eigen::Index> &skip = {});

} // namespace mpstm
