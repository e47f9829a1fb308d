#include "mpstm/xy_exact.hpp"

#include <functional>

namespace mpstm {

double xy_dispersion(const XyParams &p, double k) {
    const double a = p.g - std::cos(k);
    const double b = p.gamma * std::sin(k);
    return std::sqrt(a * a + b * b);
}

GapLocation xy_gap_location(const XyParams &p) {
    GapLocation  out;
    const double e0 = xy_dispersion(p, 0.0), epi = xy_dispersion(p, pi);
    out.k_min       = e0 <= epi ? 0.0 : pi;
    out.E_min       = std::min(e0, epi);
    const double den = 1.0 - p.gamma * p.gamma;
    if(den > 0) {
        const double c = p.g / den;
        if(std::abs(c) <= 1.0) {
            const double k = std::acos(c);
            const double e = xy_dispersion(p, k);
            if(e <= out.E_min) {
                out.k_min = k;
                out.E_min = e;
            }
        }
    }
    return out;
}

double lorentz_velocity(const XyParams &p) {
    const double den = 1.0 - p.gamma * p.gamma;
    if(!(den > 0)) throw InvalidArgument("lorentz_velocity: requires gamma^2 < 1");
    const double rad = (den * den - p.g * p.g) / den;
    if(rad < 0) throw InvalidArgument("lorentz_velocity: negative radicand (outside the incommensurate regime)");
    return std::sqrt(rad);
}

namespace {
    double simpson(const std::function<double(double)> &f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
        const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4 * flm + fm), right = (b - m) / 6.0 * (fm + 4 * frm + fb);
        const double delta = left + right - whole;
        if(depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
} // namespace

double xy_ground_energy(const XyParams &p, double tol) {
    auto         f  = [&p](double k) { return xy_dispersion(p, k); };
    const double a = 0, b = pi, m = 0.5 * pi;
    const double fa = f(a), fm = f(m), fb = f(b);
    const double I  = simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4 * fm + fb), tol, 50);
    return -I / (2.0 * pi);
}

} // namespace mpstm
