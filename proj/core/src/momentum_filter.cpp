#include "mpstm/momentum_filter.hpp"

#include "mpstm/velocity.hpp"

#include <algorithm>

namespace mpstm {

double gaussian_norm(double r) {
    if(!(r > 0)) throw InvalidArgument("gaussian_norm: r must be positive");
    // terms beyond 40 sqrt(r) are below e^{-800}
    const int n_max = static_cast<int>(std::ceil(40.0 * std::sqrt(r))) + 10;
    double    s     = 1.0;
    for(int n = n_max; n >= 1; --n) s += 2.0 * std::exp(-0.5 * n * n / r);
    return 1.0 / s;
}

double gaussian_norm_theta(double r) {
    if(!(r > 0)) throw InvalidArgument("gaussian_norm_theta: r must be positive");
    double s = 1.0;
    for(int m = 40; m >= 1; --m) s += 2.0 * std::exp(-2.0 * pi * pi * r * m * m);
    return 1.0 / (std::sqrt(2.0 * pi * r) * s);
}

// window weights beyond 9 sqrt(r) are below e^{-40}, under double precision relative to the centre
int gaussian_cutoff(double r) { return static_cast<int>(std::ceil(9.0 * std::sqrt(r))); }

cplx filter_value(const std::function<cplx(int)> &c, double k, int ell, double r) {
    const int n_cut = gaussian_cutoff(r);
    cplx      s     = 0;
    for(int n = -n_cut; n <= n_cut; ++n) s += std::exp(-0.5 * n * n / r) * std::polar(1.0, k * n) * c(ell + n);
    return gaussian_norm(r) * s;
}

namespace {

    // C_AB(m) for all integer m in [m_lo, m_hi] with single-site operators.
    std::function<cplx(int)> correlation_table(const UniformMps &mps, const SiteOperator &A0, const SiteOperator &B0, int m_lo, int m_hi) {
        if(A0.support != 1 || B0.support != 1) throw DimensionError("filtered_correlation: single-site operators required");
        const SiteOperator A    = A0.zero_mean ? A0 : zero_meaned(mps, A0);
        const SiteOperator B    = B0.zero_mean ? B0 : zero_meaned(mps, B0);
        const Vec          cab  = connected_correlation(mps, A, B, std::max(m_hi, 1));
        const Vec          cba  = connected_correlation(mps, B, A, std::max(-m_lo, 1));
        const cplx         c0   = expectation(mps, SiteOperator(1, A.matrix * B.matrix));
        return [cab, cba, c0](int m) -> cplx {
            if(m == 0) return c0;
            if(m > 0) return cab(m - 1);
            return cba(-m - 1); // <A_0 B_m> = <B_0 A_{-m}> for distinct sites
        };
    }

} // namespace

FilteredCorrelation filtered_correlation(const UniformMps &mps, const SiteOperator &A, const SiteOperator &B, double k, int ell_max, double r) {
    if(!(r > 0)) throw InvalidArgument("filtered_correlation: r must be positive");
    if(ell_max < 1) throw InvalidArgument("filtered_correlation: ell_max must be >= 1");
    const int           n_cut = gaussian_cutoff(r);
    auto                c     = correlation_table(mps, A, B, 1 - n_cut, ell_max + n_cut);
    FilteredCorrelation fc;
    fc.k   = k;
    fc.r   = r;
    fc.N_r = gaussian_norm(r);
    fc.C.resize(ell_max);
    for(int l = 1; l <= ell_max; ++l) {
        fc.ell.push_back(l);
        fc.C(l - 1) = filter_value(c, k, l, r);
    }
    return fc;
}

FilteredCorrelation filtered_correlation_scaled(const UniformMps &mps, const SiteOperator &A, const SiteOperator &B, double k, int ell_max,
                                                double ratio) {
    if(!(ratio > 0)) throw InvalidArgument("filtered_correlation_scaled: ratio must be positive");
    const int           n_cut = gaussian_cutoff(ratio * ell_max);
    auto                c     = correlation_table(mps, A, B, -n_cut, ell_max + n_cut);
    FilteredCorrelation fc;
    fc.k   = k;
    fc.r   = ratio * ell_max;
    fc.N_r = gaussian_norm(fc.r);
    fc.C.resize(ell_max);
    for(int l = 1; l <= ell_max; ++l) {
        fc.ell.push_back(l);
        fc.C(l - 1) = filter_value(c, k, l, ratio * l);
    }
    return fc;
}

DecayFit decay_rate_fit(const FilteredCorrelation &fc, int ell_min, int ell_max) {
    std::vector<double> x, y;
    for(std::size_t i = 0; i < fc.ell.size(); ++i) {
        const int l = fc.ell[i];
        if(l < ell_min || l > ell_max) continue;
        const double a = std::abs(fc.C(static_cast<Eigen::Index>(i)));
        if(a <= 1e-13) continue;
        x.push_back(l);
        y.push_back(-std::log(a));
    }
    if(x.size() < 5) throw InvalidArgument("decay_rate_fit: fewer than 5 points above 1e-13 in the window (underflow-dominated)");
    const auto f = fit_linear(x, y);
    DecayFit   d;
    d.rate     = f.slope;
    d.residual = f.rms;
    d.points   = static_cast<int>(x.size());
    // slope standard error
    double mx = 0;
    for(double v : x) mx += v;
    mx /= static_cast<double>(x.size());
    double sxx = 0, sse = 0;
    for(std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        sse += e * e;
    }
    d.rate_err = x.size() > 2 && sxx > 0 ? std::sqrt(sse / static_cast<double>(x.size() - 2) / sxx) : 0.0;
    return d;
}

double e_star(const std::function<double(double)> &dispersion, double k, double delta) {
    if(!(delta >= 0)) throw InvalidArgument("e_star: delta must be non-negative");
    const int    n    = 4000;
    double       best = dispersion(k);
    double       kb   = k;
    const double h    = 2.0 * delta / n;
    for(int i = 0; i <= n; ++i) {
        const double kp = k - delta + h * i;
        const double e  = dispersion(kp);
        if(e < best) {
            best = e;
            kb   = kp;
        }
    }
    // golden refinement inside the neighbouring sample cells
    double lo = std::max(k - delta, kb - h), hi = std::min(k + delta, kb + h);
    for(int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        const double m1 = lo + 0.381966 * (hi - lo), m2 = lo + 0.618034 * (hi - lo);
        if(dispersion(m1) < dispersion(m2)) hi = m2;
        else lo = m1;
    }
    return std::min(best, dispersion(0.5 * (lo + hi)));
}

GapBound bound_rate(const std::function<double(double)> &dispersion, double k, const std::vector<double> &delta_grid, double v_LR) {
    if(delta_grid.empty()) throw InvalidArgument("bound_rate: empty delta grid");
    if(!(v_LR > 0)) throw InvalidArgument("bound_rate: v_LR must be positive");
    GapBound g;
    g.k        = k;
    g.v_LR     = v_LR;
    g.xi_bound = std::numeric_limits<double>::infinity();
    for(double delta : delta_grid) {
        if(!(delta > 0)) throw InvalidArgument("bound_rate: delta values must be positive");
        const double es = e_star(dispersion, k, delta);
        const double xb = es > 0 ? 1.0 / delta + v_LR / es : std::numeric_limits<double>::infinity();
        g.landscape.emplace_back(delta, xb);
        if(xb < g.xi_bound || (g.landscape.size() == 1)) {
            g.xi_bound = xb;
            g.delta    = delta;
            g.E_star   = es;
        }
    }
    g.rate_bound = std::isfinite(g.xi_bound) ? 1.0 / g.xi_bound : 0.0;
    return g;
}

std::vector<double> default_delta_grid(int n) {
    std::vector<double> d;
    for(int i = 1; i <= n; ++i) d.push_back(pi * i / n);
    return d;
}

} // namespace mpstm
