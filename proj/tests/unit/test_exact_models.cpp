#include "test_util.hpp"

#include "mpstm/exact_diag.hpp"
#include "mpstm/velocity.hpp"
#include "mpstm/xy_exact.hpp"

#include <gtest/gtest.h>

using namespace mpstm;

namespace {

// golden-section refinement of a grid minimum of f on [0, pi]
std::pair<double, double> minimize(const std::function<double(double)> &f) {
    const int n    = 4000;
    int       best = 0;
    for(int i = 1; i <= n; ++i)
        if(f(pi * i / n) < f(pi * best / n)) best = i;
    double       a = pi * std::max(best - 1, 0) / n, b = pi * std::min(best + 1, n) / n;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    for(int it = 0; it < 200; ++it) {
        const double c = b - r * (b - a), d = a + r * (b - a);
        if(f(c) < f(d)) b = d;
        else a = c;
    }
    const double k = 0.5 * (a + b);
    return {k, f(k)};
}

double simpson(const std::function<double(double)> &f, double a, double b, int n) {
    const double h = (b - a) / n;
    double       s = f(a) + f(b);
    for(int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST(XyExact, PropertyDispersionNonNegativeEvenPeriodic) {
    for(double gamma : {0.0, 0.3, 0.5, 1.0})
        for(double g : {0.0, 0.2, 1.0, 1.05, 2.0}) {
            const XyParams p{gamma, g};
            for(int i = 0; i < 50; ++i) {
                const double k = -3.0 + 0.13 * i;
                EXPECT_GE(xy_dispersion(p, k), 0.0);
                EXPECT_NEAR(xy_dispersion(p, k), xy_dispersion(p, -k), 1e-14);
                EXPECT_NEAR(xy_dispersion(p, k), xy_dispersion(p, k + 2 * pi), 1e-12);
            }
        }
}

TEST(XyExact, PropertyGapLocationMatchesGridMinimization) {
    for(double gamma = 0.05; gamma < 1.0; gamma += 0.1)
        for(double g = 0.05; g < 1.0; g += 0.1) {
            if(gamma * gamma + g * g >= 1.0) continue;
            const XyParams p{gamma, g};
            const auto     gl  = xy_gap_location(p);
            const auto [k, e]  = minimize([&](double q) { return xy_dispersion(p, q); });
            EXPECT_NEAR(gl.E_min, e, 1e-10) << gamma << " " << g;
            EXPECT_NEAR(gl.k_min, k, 1e-4) << gamma << " " << g;
        }
}

TEST(XyExact, FerromagneticReferenceValues) {
    const XyParams p{0.3, 0.2};
    const auto     gl = xy_gap_location(p);
    EXPECT_NEAR(gl.k_min / pi, 0.42949, 5e-5);
    EXPECT_NEAR(std::cos(gl.k_min), 0.2 / (1 - 0.09), 1e-14);
    EXPECT_NEAR(gl.E_min, 0.29334, 1e-5);
    EXPECT_NEAR(lorentz_velocity(p), 0.9306, 5e-5);
}

TEST(XyExact, LorentzVelocityIsCurvatureOfSquaredDispersion) {
    for(auto p : {XyParams{0.3, 0.2}, XyParams{0.5, 0.4}, XyParams{0.1, 0.6}}) {
        const double k  = xy_gap_location(p).k_min;
        const auto   E2 = [&](double q) { return std::pow(xy_dispersion(p, q), 2); };
        const auto   d2 = [&](double h) { return (E2(k + h) - 2 * E2(k) + E2(k - h)) / (h * h); };
        const double h  = 1e-2;
        // two Richardson steps remove the h^2 and h^4 error terms
        const double second = (64 * d2(h / 4) - 20 * d2(h / 2) + d2(h)) / 45.0;
        EXPECT_NEAR(0.5 * second, std::pow(lorentz_velocity(p), 2), 1e-10);
    }
    EXPECT_THROW((void)lorentz_velocity({0.5, 1.05}), InvalidArgument);
}

TEST(XyExact, IsingLimitMatchesDirectQuadrature) {
    for(double g : {0.5, 1.5, 3.0}) {
        const double ref = -simpson([&](double k) { return std::sqrt(1 + g * g - 2 * g * std::cos(k)); }, 0, pi, 20000) / (2 * pi);
        EXPECT_NEAR(xy_ground_energy({1.0, g}), ref, 1e-11);
    }
}

TEST(XyExact, QuadratureIsConverged) {
    for(auto p : {XyParams{0.3, 0.2}, XyParams{0.5, 1.05}, XyParams{0.0, 1.0}})
        EXPECT_NEAR(xy_ground_energy(p, 1e-12), xy_ground_energy(p, 5e-13), 1e-10);
}

TEST(XyExact, GroundEnergyAgreesWithExtrapolatedDiagonalization) {
    const XyParams      p{0.5, 1.5};
    const auto          h = build_hamiltonian(Model::XY, {p.gamma, p.g});
    std::vector<double> inv_l2, e;
    EdOptions           o;
    o.want_vector = false;
    o.k_sector    = 0;
    for(int L : {8, 10, 12}) {
        inv_l2.push_back(1.0 / (L * L));
        e.push_back(ed_ground_state(h, L, o).E0 / L);
    }
    EXPECT_NEAR(fit_linear(inv_l2, e).intercept, xy_ground_energy(p), 1e-3);
}

TEST(Ed, FieldOnlyChain) {
    const auto h = build_hamiltonian(Model::FIELD_ONLY, {1.0});
    const auto r = ed_ground_state(h, 4);
    EXPECT_NEAR(r.E0 / 4, -0.5, 1e-13);
    EXPECT_NEAR(r.gap, 1.0, 1e-13);
    EXPECT_EQ(r.ground_m, 0);
}

TEST(Ed, ParamagneticEnergyWithinFiniteSizeEnvelope) {
    const XyParams p{0.5, 1.05};
    const auto     h    = build_hamiltonian(Model::XY, {p.gamma, p.g});
    const double   einf = xy_ground_energy(p);
    EdOptions      o;
    o.want_vector = false;
    double prev   = 1e9;
    for(int L : {8, 10, 12}) {
        const double dev = std::abs(ed_ground_state(h, L, o).E0 / L - einf);
        EXPECT_LT(dev, 1e-2) << L;
        EXPECT_LT(dev, prev) << L;
        prev = dev;
    }
}

TEST(Ed, BrokenPhaseHasTwofoldQuasiDegenerateGround) {
    const auto h = build_hamiltonian(Model::XY, {0.3, 0.2});
    EdOptions  o;
    o.want_vector = false;
    // incommensurate order makes the splitting oscillate with L, so only its size is checked
    for(int L : {8, 10, 12}) {
        const auto   r     = ed_ground_state(h, L, o);
        const double split = r.lowest[1].E - r.lowest[0].E;
        const double gap   = r.lowest[2].E - r.lowest[0].E;
        EXPECT_LT(split, 0.1 * gap) << L;
        EXPECT_LT(split, 1e-2) << L;
    }
}

TEST(Ed, HamiltonianIsHermitianAndSectorsAreConsistent) {
    const auto h   = build_hamiltonian(Model::XXZ, {0.4, 0.1});
    const Vec  x   = krylov::random_vector(1 << 8, 1), y = krylov::random_vector(1 << 8, 2);
    const cplx a   = x.dot(ed_apply_h(h, 8, y)), b = ed_apply_h(h, 8, x).dot(y);
    EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(a));

    EdOptions all;
    all.want_vector = true;
    const auto r    = ed_ground_state(h, 8, all);
    ASSERT_EQ(r.ground.size(), 256);
    EXPECT_NEAR(r.ground.norm(), 1.0, 1e-12);
    EXPECT_LT((ed_apply_h(h, 8, r.ground) - r.E0 * r.ground).norm(), 1e-8);
    double low = 1e9;
    for(const auto &lv : r.sector_levels)
        if(!lv.empty()) low = std::min(low, lv.front());
    EXPECT_NEAR(low, r.E0, 1e-12);
}

TEST(Ed, RejectsOversizedChains) {
    const auto h = build_hamiltonian(Model::BLBQ, {0.3});
    EXPECT_THROW((void)ed_ground_state(h, 12), DimensionError);
}

TEST(Ed, SingleModeEstimateIsAnUpperBound) {
    const auto h  = build_hamiltonian(Model::XY, {0.5, 1.05});
    const auto gs = ed_ground_state(h, 10);
    for(const Mat &O : {spin::spin_ops(1).sx, spin::spin_ops(1).sz})
        for(const auto &pt : ed_sma(h, gs, O)) {
            if(pt.m == 0) continue;
            const double ex = std::min(ed_sector_excitation(gs, pt.m), ed_sector_excitation(gs, (10 - pt.m) % 10));
            EXPECT_GE(pt.E_sma, ex - 1e-8) << pt.m;
        }
}
