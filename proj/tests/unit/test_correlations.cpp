#include "test_util.hpp"

#include "mpstm/branches.hpp"
#include "mpstm/correlation.hpp"
#include "mpstm/exact_diag.hpp"
#include "mpstm/operator_tm.hpp"
#include "mpstm/oz_fit.hpp"
#include "mpstm/spectrum.hpp"
#include "mpstm/structure_factor.hpp"
#include "mpstm/xy_exact.hpp"

#include <gtest/gtest.h>

using namespace mpstm;

namespace {

// vec of R -> sum_{s,t} O_{st} K^t R B^{s dagger}
Mat kron_operator_tm(const UniformMps &mps, const Mat &O) {
    const Eigen::Index n = mps.D() * mps.D();
    Mat                J = Mat::Zero(n, n);
    for(int s = 0; s < mps.d(); ++s)
        for(int t = 0; t < mps.d(); ++t)
            J += O(s, t) * spin::kron(mps.A[static_cast<std::size_t>(s)].conjugate(), mps.A[static_cast<std::size_t>(t)]);
    return J;
}

TmSpectrum full_spectrum(const UniformMps &mps) {
    SpectrumOptions so;
    so.dense = true;
    so.m     = static_cast<int>(mps.D() * mps.D());
    return tm_spectrum(mps, mps, so);
}

} // namespace

TEST(OperatorTm, MatrixFreeMatchesKroneckerOracle) {
    const auto mps = random_mps(3, 2, 81);
    const Mat  sx  = spin::spin_ops(1).sx;
    const Mat  J   = kron_operator_tm(mps, sx);
    const auto op  = operator_tm(mps, SiteOperator(1, sx));
    for(Eigen::Index i = 0; i < 9; ++i) {
        Vec e = Vec::Zero(9);
        e(i)  = 1.0;
        EXPECT_LE((op.apply(Direction::right, e) - J.col(i)).norm(), 1e-12 * J.norm());
        const Mat lt = as_matrix(Vec(J.transpose() * flatten(as_matrix(e, 3, 3).transpose())), 3, 3).transpose();
        EXPECT_LE((op.apply(Direction::left, e) - flatten(lt)).norm(), 1e-12 * J.norm());
    }
}

TEST(OperatorTm, TwoSiteOperatorEqualsProductOfOneSiteOperators) {
    const auto mps = random_mps(3, 2, 82);
    const auto sp  = spin::spin_ops(1);
    const auto two = operator_tm(mps, SiteOperator(2, spin::kron(sp.sx, sp.sz)));
    // the first site's operator is applied last in the right action
    const Mat  J   = kron_operator_tm(mps, sp.sx) * kron_operator_tm(mps, sp.sz);
    const Vec  v   = krylov::random_vector(9, 3);
    EXPECT_LE((two.apply(Direction::right, v) - J * v).norm(), 1e-12 * J.norm() * v.norm());
    EXPECT_THROW((void)operator_tm(mps, SiteOperator(kMaxSupport + 1, Mat::Identity(32, 32))), DimensionError);
}

TEST(Correlation, ConnectedMatchesWindowContraction) {
    const auto mps = test::random_injective(3, 2, 91);
    const auto sp  = spin::spin_ops(1);
    const Vec  c   = connected_correlation(mps, SiteOperator(1, sp.sx), SiteOperator(1, sp.sz), 20);
    ASSERT_EQ(c.size(), 20);
    for(int n = 1; n <= 20; ++n) EXPECT_NEAR(std::abs(c(n - 1) - test::window_correlation(mps, sp.sx, sp.sz, n)), 0.0, 1e-10) << n;
}

TEST(Correlation, PropertySpectralResummationMatchesDirectContraction) {
    for(std::uint64_t seed = 1; seed <= 12; ++seed) {
        const int  d   = 2 + static_cast<int>(seed % 2);
        const auto mps = test::random_injective(2 + static_cast<Eigen::Index>(seed % 4), d, 100 + seed);
        const Mat  A   = test::random_hermitian(d, seed), B = test::random_hermitian(d, seed + 50);
        const auto spec = full_spectrum(mps);
        const auto ff   = form_factors(mps, spec, SiteOperator(1, A), SiteOperator(1, B));
        const Vec  res  = correlation_from_spectrum(spec, ff, 50);
        const Vec  dir  = connected_correlation(mps, SiteOperator(1, A), SiteOperator(1, B), 50);
        EXPECT_LE((res - dir).cwiseAbs().maxCoeff(), 1e-10) << "seed " << seed;
    }
}

TEST(Correlation, ProductStateHasNoConnectedPart) {
    Vec v(2);
    v << 0.6, 0.8;
    const auto mps = product_mps(v);
    const auto sp  = spin::spin_ops(1);
    EXPECT_LE(connected_correlation(mps, SiteOperator(1, sp.sx), SiteOperator(1, sp.sx), 5).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Correlation, ParamagneticFormFactorsLiveOnRealBranch) {
    const auto     &mps = test::xy_state(0.5, 1.05, 16);
    SpectrumOptions so;
    so.m            = 16;
    const auto spec = tm_spectrum(mps, mps, so);
    const Mat  sx   = spin::spin_ops(1).sx;
    const auto ff   = form_factors(mps, spec, SiteOperator(1, sx), SiteOperator(1, sx));
    ASSERT_GT(ff.size(), 0U);
    // the largest weight sits on a real eigenvalue
    Eigen::Index best = 0;
    ff.f.cwiseAbs().maxCoeff(&best);
    const auto j = ff.j[static_cast<std::size_t>(best)];
    EXPECT_LT(std::min(std::abs(spec.phi(j)), pi - std::abs(spec.phi(j))), 1e-6);
}

TEST(Expectation, ParamagneticMagnetizationMatchesFreeFermions) {
    const double gamma = 0.5, g = 1.05;
    const auto   E     = [&](double k) { return std::sqrt((g - std::cos(k)) * (g - std::cos(k)) + gamma * gamma * std::sin(k) * std::sin(k)); };
    const auto   mz    = [&](double k) { return (g - std::cos(k)) / E(k); };
    // infinite chain: midpoint rule on a smooth periodic integrand
    const int n   = 20000;
    double    inf = 0;
    for(int i = 0; i < n; ++i) inf += mz(pi * (i + 0.5) / n);
    inf /= 2.0 * n;
    // periodic ring of 12 sites: antiperiodic fermion momenta in the even-parity sector
    double ring = 0;
    for(int j = 0; j < 12; ++j) ring += mz((2 * j + 1) * pi / 12);
    ring /= 24.0;

    const auto  h   = build_hamiltonian(Model::XY, {gamma, g});
    const auto &mps = test::xy_state(gamma, g, 16);
    const Mat   sz  = spin::spin_ops(1).sz;
    EdOptions   eo;
    eo.k_sector     = 0;
    const auto gs   = ed_ground_state(h, 12, eo);
    const cplx m_ed = gs.ground.dot(ed_apply_site(sz, 2, 12, 0, gs.ground));
    EXPECT_NEAR(m_ed.real(), ring, 1e-10);
    EXPECT_NEAR(expectation(mps, SiteOperator(1, sz)).real(), inf, 1e-4);
    EXPECT_NEAR(expectation(mps, SiteOperator::identity(2, 3)).real(), 1.0, 1e-12);
}

TEST(StructureFactor, ProductStateIsFlat) {
    Vec v(2);
    v << 0.6, 0.8;
    const auto mps = product_mps(v);
    const auto O   = zero_meaned(mps, SiteOperator(1, spin::spin_ops(1).sz));
    const auto sf  = structure_factor(mps, O, default_kgrid(32));
    const double o2 = (O.matrix * O.matrix).real()(0, 0) * 0.36 + (O.matrix * O.matrix).real()(1, 1) * 0.64;
    for(double s : sf.S) EXPECT_NEAR(s, o2, 1e-12);
}

TEST(StructureFactor, ResolventMatchesTruncatedFourierSum) {
    const auto mps = test::random_injective(3, 2, 111);
    ASSERT_LT(mps.lambda1, 0.9);
    const auto O    = SiteOperator(1, spin::spin_ops(1).sx);
    const auto grid = default_kgrid(64);
    const auto sf   = structure_factor(mps, O, grid);
    const auto tr   = structure_factor_truncated(mps, O, grid, 200);
    for(std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(sf.S[i], tr[i], 1e-6);
    EXPECT_LE(sf.max_residual, 1e-9);

    const auto spec = full_spectrum(mps);
    const auto sp   = structure_factor_spectral(mps, O, spec, grid);
    for(std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(sf.S[i], sp.S[i], 1e-8);
}

TEST(StructureFactor, GridIsMidpointRule) {
    const auto g = default_kgrid();
    ASSERT_EQ(g.size(), 512U);
    EXPECT_NEAR(g.front(), pi / 512, 1e-15);
    EXPECT_NEAR(g[1] - g[0], 2 * pi / 512, 1e-15);
}

TEST(OscillatorStrength, VanishesWhenOperatorCommutesWithH) {
    const auto h  = build_hamiltonian(Model::FIELD_ONLY, {0.7});
    const auto F  = oscillator_strength(test::random_injective(3, 2, 5), h, spin::spin_ops(1).sz, default_kgrid(16));
    for(double f : F) EXPECT_NEAR(f, 0.0, 1e-13);
    const auto E = sma_dispersion(std::vector<double>(4, 0.0), std::vector<double>(4, 1.0));
    for(double e : E) EXPECT_EQ(e, 0.0);
}

TEST(OscillatorStrength, BoundedAndEvenOnParamagneticState) {
    const auto  h    = build_hamiltonian(Model::XY, {0.5, 1.05});
    const auto &mps  = test::xy_state(0.5, 1.05, 16);
    const Mat   sx   = spin::spin_ops(1).sx;
    const auto  grid = default_kgrid(64);
    const auto  F    = oscillator_strength(mps, h, sx, grid);
    const double bound = oscillator_strength_bound(sx, h, 0, 1);
    EXPECT_NEAR(bound, 4.0 * 3 * 2 * 0.25 * h.norm(), 1e-12);
    for(std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_LE(std::abs(F[i]), bound);
        EXPECT_GE(F[i], 0.0);
        EXPECT_NEAR(F[i], F[grid.size() - 1 - i], 1e-9); // k and 2 pi - k
    }
}

TEST(Sma, MonotoneInStructureFactor) {
    const std::vector<double> F(5, 2.0), S{1.0, 2.0, 5.0, 3.0, 0.5};
    const auto                E = sma_dispersion(F, S);
    EXPECT_EQ(std::min_element(E.begin(), E.end()) - E.begin(), 2);
    EXPECT_THROW((void)sma_dispersion(F, {1.0, 0.0, 1.0, 1.0, 1.0}), InvalidArgument);
}

TEST(Sma, ParamagneticEstimateBoundedByExactDispersion) {
    const auto     h    = build_hamiltonian(Model::XY, {0.5, 1.05});
    const auto    &mps  = test::xy_state(0.5, 1.05, 16);
    const Mat      sx   = spin::spin_ops(1).sx;
    const auto     grid = default_kgrid(32);
    const auto     S    = structure_factor(mps, zero_meaned(mps, SiteOperator(1, sx)), grid).S;
    const auto     E    = sma_dispersion(oscillator_strength(mps, h, sx, grid), S);
    const XyParams p{0.5, 1.05};
    // S^x creates single quasiparticles, so E(k) is the variational floor
    for(std::size_t i = 0; i < grid.size(); ++i) EXPECT_GE(E[i], xy_dispersion(p, grid[i]) - 1e-6) << grid[i];
}

TEST(OzFit, RecoversSyntheticGenerator) {
    std::vector<double> eps, f;
    for(int j = 0; j < 8; ++j) {
        eps.push_back(0.1 + 0.01 * j * j);
        f.push_back(1.0);
    }
    const auto r = oz_fit_data(eps, f);
    EXPECT_NEAR(r.kappa, 2.0, 1e-8);
    EXPECT_NEAR(r.rho, 0.0, 1e-8);
    EXPECT_NEAR(r.eta, 0.5, 1e-8);
    EXPECT_NEAR(r.xi, 10.0, 1e-8);
    EXPECT_NEAR(r.g, 0.01, 1e-10);
}

TEST(OzFit, PropertyRecoversExponents) {
    for(double kappa : {1.5, 2.0, 3.0})
        for(double rho : {-0.5, 0.0, 0.7}) {
            std::vector<double> eps, f;
            for(int j = 0; j < 8; ++j) {
                eps.push_back(0.3 + 0.02 * std::pow(j, kappa));
                f.push_back(j == 0 ? 0.4 : 0.1 * std::pow(j, rho));
            }
            const auto r = oz_fit_data(eps, f);
            EXPECT_NEAR(r.kappa, kappa, 1e-6);
            EXPECT_NEAR(r.rho, rho, 1e-6);
            EXPECT_NEAR(r.eta, (1 + rho) / kappa, 1e-6);
        }
}

TEST(OzFit, TooFewMembersRejected) {
    EXPECT_THROW((void)oz_fit_data({0.1, 0.2, 0.3}, {1.0, 1.0, 1.0}), InvalidArgument);
    EXPECT_THROW((void)oz_fit_data({0.1, 0.1, 0.1, 0.1, 0.1}, {1.0, 1.0, 1.0, 1.0, 1.0}), InvalidArgument);
}
