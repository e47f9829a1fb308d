#pragma once

#include "mpstm/common.hpp"

#include <vector>

namespace mpstm {

/// v = e_min / eps1.
[[nodiscard]] double estimate_velocity(double eps1, double e_min);

struct LinearFit {
    double intercept = 0;
    double slope     = 0;
    double rms       = 0; // root-mean-square residual
    double intercept_stderr = 0;
};

/// Ordinary least squares y = intercept + slope x (at least two points).
[[nodiscard]] LinearFit fit_linear(const std::vector<double> &x, const std::vector<double> &y);

/// eps1(D) = a + b / D, returns the fit; `intercept` is the D -> infinity value.
[[nodiscard]] LinearFit extrapolate_inverse_D(const std::vector<double> &D, const std::vector<double> &eps1);

struct PowerLawFit {
    double a = 0, b = 0, c = 1; // y = a + b x^(-c)
    double rms = 0;
};

/// y = a + b x^(-c) with c scanned over (0, c_max] and (a, b) by least squares.
[[nodiscard]] PowerLawFit fit_power_law(const std::vector<double> &x, const std::vector<double> &y, double c_max = 4.0);

} // namespace mpstm
