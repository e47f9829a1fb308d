#pragma once

#include "mpstm/branches.hpp"
#include "mpstm/correlation.hpp"

namespace mpstm {

/// eps_j = Delta + g j^kappa and |f_j| ~ j^rho along one branch, j = 0, 1, ... over members
/// with non-vanishing form factors (ascending eps). Delta is pinned to the j = 0 member.
struct OzFit {
    double              phi   = 0;
    double              delta = 0;
    double              kappa = 0;
    double              g     = 0;
    double              rho   = 0;
    double              eta   = 0; // (1 + rho) / kappa
    double              xi    = 0; // 1 / delta
    double              eps_rms = 0;
    double              ff_rms  = 0;
    double              condition = 0;
    std::vector<double> eps;   // fitted data, j = 0 ..
    std::vector<double> fabs;  // |f_j|
};

inline constexpr int kOzMaxMembers = 8;

/// Throws InvalidArgument with fewer than 4 usable members or an unidentifiable kappa.
[[nodiscard]] OzFit oz_fit(const TmSpectrum &spec, const FormFactorSet &ff, const Branch &branch, int max_members = kOzMaxMembers);

/// Fit on raw data (eps ascending, |f| for the same j = 0 ..).
[[nodiscard]] OzFit oz_fit_data(const std::vector<double> &eps, const std::vector<double> &fabs);

} // namespace mpstm
