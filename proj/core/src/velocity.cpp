#include "mpstm/velocity.hpp"

namespace mpstm {

double estimate_velocity(double eps1, double e_min) {
    if(!(eps1 > 0) || !(e_min > 0)) throw InvalidArgument("estimate_velocity: eps1 and e_min must be positive");
    return e_min / eps1;
}

LinearFit fit_linear(const std::vector<double> &x, const std::vector<double> &y) {
    if(x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_linear: need at least two (x, y) pairs");
    const auto n = static_cast<Eigen::Index>(x.size());
    RMat       A(n, 2);
    RVec       b(n);
    for(Eigen::Index i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = x[static_cast<std::size_t>(i)];
        b(i)    = y[static_cast<std::size_t>(i)];
    }
    const RVec   c = A.colPivHouseholderQr().solve(b);
    const RVec   r = A * c - b;
    LinearFit    f;
    f.intercept    = c(0);
    f.slope        = c(1);
    f.rms          = std::sqrt(r.squaredNorm() / static_cast<double>(n));
    if(n > 2) {
        const double s2  = r.squaredNorm() / static_cast<double>(n - 2);
        const RMat   cov = s2 * (A.transpose() * A).inverse();
        f.intercept_stderr = std::sqrt(cov(0, 0));
    }
    return f;
}

LinearFit extrapolate_inverse_D(const std::vector<double> &D, const std::vector<double> &eps1) {
    std::vector<double> x;
    for(double v : D) {
        if(!(v > 0)) throw InvalidArgument("extrapolate_inverse_D: D must be positive");
        x.push_back(1.0 / v);
    }
    return fit_linear(x, eps1);
}

PowerLawFit fit_power_law(const std::vector<double> &x, const std::vector<double> &y, double c_max) {
    if(x.size() != y.size() || x.size() < 3) throw InvalidArgument("fit_power_law: need at least three points");
    auto eval = [&](double c) {
        std::vector<double> t;
        for(double v : x) t.push_back(std::pow(v, -c));
        const auto f = fit_linear(t, y);
        return PowerLawFit{f.intercept, f.slope, c, f.rms};
    };
    const int   n    = 400;
    PowerLawFit best = eval(c_max / n);
    for(int i = 2; i <= n; ++i) {
        const auto f = eval(c_max * i / n);
        if(f.rms < best.rms) best = f;
    }
    // golden-section refinement inside the bracketing grid cell
    double lo = std::max(1e-6, best.c - c_max / n), hi = best.c + c_max / n;
    for(int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) * 0.381966, m2 = lo + (hi - lo) * 0.618034;
        if(eval(m1).rms < eval(m2).rms) hi = m2;
        else lo = m1;
    }
    const auto f = eval(0.5 * (lo + hi));
    return f.rms < best.rms ? f : best;
}

} // namespace mpstm
