#include "test_util.hpp"

#include "mpstm/branches.hpp"
#include "mpstm/spectrum.hpp"
#include "mpstm/velocity.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace mpstm;

namespace {

Vec sorted_dense(const Mat &a) {
    Eigen::ComplexEigenSolver<Mat> es(a);
    std::vector<cplx>              v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::stable_sort(v.begin(), v.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
    return Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// distance from each value of `a` to the nearest value of `b`
double match_error(const Vec &a, const Vec &b) {
    double worst = 0;
    for(Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, (b.array() - a(i)).abs().minCoeff());
    return worst;
}

} // namespace

TEST(Krylov, TopEightOfRandomTransferMatrixMatchDense) {
    const auto         mps = random_mps(4, 2, 7);
    krylov::EigOptions o;
    o.nev         = 8;
    o.ncv         = 12;
    o.dense_below = 0;
    o.tol         = 1e-13;
    const auto r  = krylov::eigs(tm_operator(mps, mps, Direction::right), 16, o);
    ASSERT_TRUE(r.converged);
    const Vec dense = sorted_dense(test::kron_tm(mps, mps));
    EXPECT_LE(match_error(r.values, dense.head(10)), 1e-10);
    EXPECT_NEAR(std::abs(r.values(0)), std::abs(dense(0)), 1e-10);
}

TEST(Krylov, LargerNonHermitianOperator) {
    const Eigen::Index n = 300;
    Mat                a = Mat::Zero(n, n);
    for(Eigen::Index j = 0; j < n; ++j) a.col(j) = krylov::random_vector(n, 500 + static_cast<std::uint64_t>(j)) / std::sqrt(double(n));
    a.diagonal().head(4) += Vec::LinSpaced(4, 3.0, 6.0);
    krylov::EigOptions o;
    o.nev        = 4;
    const auto r = krylov::eigs([&](const Vec &x, Vec &y) { y = a * x; }, n, o);
    ASSERT_TRUE(r.converged);
    EXPECT_LE(match_error(r.values, sorted_dense(a).head(6)), 1e-8);
    for(Eigen::Index i = 1; i < r.values.size(); ++i) EXPECT_GE(std::abs(r.values(i - 1)) + 1e-12, std::abs(r.values(i)));
}

TEST(Krylov, GmresSolvesShiftedSystem) {
    const Eigen::Index n = 80;
    Mat                a = Mat::Identity(n, n) * 3.0;
    for(Eigen::Index j = 0; j < n; ++j) a.col(j) += krylov::random_vector(n, 900 + static_cast<std::uint64_t>(j)) * 0.1;
    const Vec                  b = krylov::random_vector(n, 1);
    krylov::GmresOptions       o;
    const auto                 r = krylov::gmres([&](const Vec &x, Vec &y) { y = a * x; }, b, Vec::Zero(n), o);
    ASSERT_TRUE(r.converged);
    EXPECT_LE((a * r.x - b).norm() / b.norm(), 1e-9);
}

TEST(Spectrum, RegularSpectrumIsNormalizedAndBiorthogonal) {
    const auto      mps = test::random_injective(4, 2, 61);
    SpectrumOptions so;
    so.m       = 6;
    const auto s = tm_spectrum(mps, mps, so);
    EXPECT_EQ(s.kind, TmKind::regular);
    EXPECT_NEAR(std::abs(s.eigenvalues(0) - 1.0), 0.0, 1e-10);
    EXPECT_NEAR(s.eps(0), 0.0, 1e-10);
    EXPECT_LE(s.biorth_residual, 1e-8);
    ASSERT_TRUE(s.has_vectors());
    for(Eigen::Index i = 0; i < s.size(); ++i)
        for(Eigen::Index j = 0; j < s.size(); ++j) {
            const cplx p = tm_pair(s.left.col(i), s.right.col(j), mps.D(), mps.D());
            EXPECT_NEAR(std::abs(p - (i == j ? 1.0 : 0.0)), 0.0, 1e-8);
        }
}

TEST(Spectrum, DenseAndKrylovPathsAgree) {
    const auto      mps = test::random_injective(5, 2, 71);
    SpectrumOptions a, b;
    a.m       = 6;
    b.m       = 25;
    b.dense   = true;
    const auto sa = tm_spectrum(mps, mps, a);
    const auto sb = tm_spectrum(mps, mps, b);
    EXPECT_LE(match_error(sa.eigenvalues, sb.eigenvalues), 1e-9);
}

TEST(Spectrum, PropertyConjugatePairsAndUnitRadius) {
    for(std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto      mps = test::random_injective(2 + static_cast<Eigen::Index>(seed % 4), 2 + static_cast<int>(seed % 2), seed * 13);
        SpectrumOptions so;
        so.dense   = true;
        so.m       = static_cast<int>(mps.D() * mps.D());
        so.vectors = false;
        const auto s = tm_spectrum(mps, mps, so);
        EXPECT_LE(conjugation_defect(s), 1e-9) << "seed " << seed;
        EXPECT_NEAR(std::abs(s.eigenvalues(0)), 1.0, 1e-12);
        for(Eigen::Index i = 1; i < s.size(); ++i) {
            EXPECT_GE(s.eps(i) + 1e-12, s.eps(i - 1));
            EXPECT_GE(s.phi(i), -pi);
            EXPECT_LT(s.phi(i), pi);
        }
    }
}

TEST(Spectrum, MixedSpectrumOfBrokenPartnersInsideUnitCircle) {
    const auto     &mps     = test::xy_state(0.3, 0.2, 16);
    const auto      partner = apply_symmetry(mps, 2.0 * spin::spin_ops(1).sz);
    SpectrumOptions so;
    so.m       = 6;
    so.vectors = false;
    const auto s = tm_spectrum(mps, partner, so);
    EXPECT_EQ(s.kind, TmKind::mixed);
    for(Eigen::Index i = 0; i < s.size(); ++i) EXPECT_LT(std::abs(s.eigenvalues(i)), 1.0);
    EXPECT_GT(s.eps(0), 0.0);
}

TEST(Branches, SyntheticClustersOnTheCircle) {
    RVec eps(7), phi(7);
    eps << 0.0, 0.5, 0.6, 0.7, 0.4, 0.9, 0.45;
    phi << 0.0, 0.5 * pi, 0.505 * pi, 0.51 * pi, -0.5 * pi, -pi + 0.001, 0.999 * pi;
    const auto b = cluster_phases(eps, phi, kDefaultPhaseTol, 10.0, {0});
    ASSERT_EQ(b.size(), 3U);
    EXPECT_NEAR(b[0].delta, 0.4, 1e-14); // -pi/2 branch
    EXPECT_EQ(b[0].count(), 1U);
    EXPECT_NEAR(b[1].delta, 0.45, 1e-14); // wraps through pi
    EXPECT_EQ(b[1].count(), 2U);
    EXPECT_NEAR(b[2].phi, 0.505 * pi, 1e-12);
    EXPECT_EQ(b[2].count(), 3U);
    EXPECT_EQ(b[0].partner, 2);
}

TEST(Branches, EpsCutDropsWeakMembers) {
    RVec eps(4), phi(4);
    eps << 0.0, 0.3, 2.0, 0.5;
    phi << 0.0, 1.0, 1.0, -1.0;
    const auto b = cluster_phases(eps, phi, kDefaultPhaseTol, 1.0, {0});
    ASSERT_EQ(b.size(), 2U);
    for(const auto &br : b) EXPECT_EQ(br.count(), 1U);
}

TEST(Velocity, LinearFitsAreExactOnLines) {
    const std::vector<double> D{16, 24, 32, 40};
    std::vector<double>       e;
    for(double x : D) e.push_back(0.31 + 2.5 / x);
    const auto f = extrapolate_inverse_D(D, e);
    EXPECT_NEAR(f.intercept, 0.31, 1e-12);
    EXPECT_NEAR(f.slope, 2.5, 1e-10);
    EXPECT_NEAR(f.rms, 0.0, 1e-12);
    EXPECT_NEAR(estimate_velocity(0.31, 0.29334), 0.29334 / 0.31, 1e-15);
    EXPECT_THROW((void)fit_linear({1.0}, {2.0}), InvalidArgument);
    EXPECT_THROW((void)estimate_velocity(0.0, 1.0), InvalidArgument);
}

TEST(Velocity, PowerLawRecoversExponent) {
    std::vector<double> x, y;
    for(double v : {8.0, 12.0, 16.0, 24.0, 32.0, 48.0}) {
        x.push_back(v);
        y.push_back(0.2 + 1.7 * std::pow(v, -1.5));
    }
    const auto f = fit_power_law(x, y);
    EXPECT_NEAR(f.c, 1.5, 1e-2);
    EXPECT_NEAR(f.a, 0.2, 1e-3);
}
