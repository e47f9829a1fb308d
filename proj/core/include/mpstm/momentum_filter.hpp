#pragma once

#include "mpstm/correlation.hpp"

#include <functional>
#include <vector>

namespace mpstm {

/// C_k(l) = N_r sum_{|n| <= ceil(9 sqrt r)} e^{-n^2/(2r)} e^{ikn} C_AB(l + n).
struct FilteredCorrelation {
    double           k   = 0;
    double           r   = 1;
    double           N_r = 1;
    std::vector<int> ell;
    Vec              C;
};

/// 1 / sum_n e^{-n^2/(2r)}, summed until the tail is below double precision.
[[nodiscard]] double gaussian_norm(double r);
/// Same normalization from the Poisson-resummed theta series sqrt(2 pi r) sum_m e^{-2 pi^2 r m^2}.
[[nodiscard]] double gaussian_norm_theta(double r);
/// Half-width of the truncated Gaussian sum.
[[nodiscard]] int gaussian_cutoff(double r);

/// Single-site A and B. Values at l = 1 .. ell_max.
[[nodiscard]] FilteredCorrelation filtered_correlation(const UniformMps &mps, const SiteOperator &A, const SiteOperator &B, double k, int ell_max,
                                                       double r);

/// Same with r chosen per distance (r = ratio * l); the series at each l uses its own width.
[[nodiscard]] FilteredCorrelation filtered_correlation_scaled(const UniformMps &mps, const SiteOperator &A, const SiteOperator &B, double k,
                                                              int ell_max, double ratio);

/// Filter applied to a precomputed correlation function; c(m) must be defined for all m that are needed.
[[nodiscard]] cplx filter_value(const std::function<cplx(int)> &c, double k, int ell, double r);

struct DecayFit {
    double rate      = 0;
    double rate_err  = 0; // standard error of the slope
    double residual  = 0; // rms of the log-linear fit
    int    points    = 0;
    [[nodiscard]] double xi() const { return 1.0 / rate; }
};

/// Least-squares slope of -log|C(l)| on l_min <= l <= l_max, using points with |C| > 1e-13.
[[nodiscard]] DecayFit decay_rate_fit(const FilteredCorrelation &fc, int ell_min, int ell_max);

struct GapBound {
    double k        = 0;
    double delta    = 0;
    double E_star   = 0;
    double v_LR     = 0;
    double xi_bound = 0; // 1/delta + v_LR / E_star (infinite if gapless)
    double rate_bound = 0;
    std::vector<std::pair<double, double>> landscape; // (delta, xi_bound(delta))
};

/// min over |k' - k| <= delta of E(k') by dense sampling plus local refinement.
[[nodiscard]] double e_star(const std::function<double(double)> &dispersion, double k, double delta);

/// Evaluate xi_bound on the delta grid and keep the minimizer.
[[nodiscard]] GapBound bound_rate(const std::function<double(double)> &dispersion, double k, const std::vector<double> &delta_grid, double v_LR);

/// 200 uniform values in (0, pi].
[[nodiscard]] std::vector<double> default_delta_grid(int n = 200);

} // namespace mpstm
