#include "test_util.hpp"

#include "mpstm/aklt.hpp"
#include "mpstm/cylinder.hpp"
#include "mpstm/spectrum.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace mpstm;

namespace {

// Ring transfer matrix summed configuration by configuration. Row index: right legs, column index: left legs,
// each as sum_y (ket * 2 + bra) 4^y; the vertical bond below site y is shared with the top of site y + 1.
Mat brute_force_ring(const PepsTensor &t, int ny) {
    const int n = 1 << (2 * ny);
    Mat       M = Mat::Zero(n, n);
    const auto digit = [](int idx, int y) { return (idx >> (2 * y)) & 3; };
    for(int out = 0; out < n; ++out)
        for(int in = 0; in < n; ++in)
            for(int bonds = 0; bonds < n; ++bonds) { // doubled vertical bond above each site
                cplx prod = 1.0;
                for(int y = 0; y < ny && prod != cplx(0); ++y) {
                    const int up = digit(bonds, y), dn = digit(bonds, (y + 1) % ny);
                    const int l = digit(in, y), r = digit(out, y);
                    cplx      w = 0;
                    for(int s = 0; s < t.d; ++s)
                        w += t.at(s, up / 2, dn / 2, l / 2, r / 2) * std::conj(t.at(s, up % 2, dn % 2, l % 2, r % 2));
                    prod *= w;
                }
                M(out, in) += prod;
            }
    return M;
}

} // namespace

TEST(Aklt, TensorsAreSpinSinglets) {
    for(Lattice l : {Lattice::square, Lattice::hexagonal}) {
        const auto t = aklt_tensor(l);
        EXPECT_LT(peps_symmetry_defect(t), 1e-12) << lattice_name(l);
        EXPECT_EQ(parse_lattice(lattice_name(l)), l);
    }
    EXPECT_EQ(aklt_tensor(Lattice::square).d, 5);
    EXPECT_EQ(aklt_tensor(Lattice::hexagonal).d, 16);
}

TEST(Aklt, SymmetricProjectorIsAnIsometry) {
    for(int n = 1; n <= 4; ++n) {
        const Mat P = symmetric_projector(n);
        ASSERT_EQ(P.rows(), n + 1);
        EXPECT_LT((P * P.adjoint() - Mat::Identity(n + 1, n + 1)).norm(), 1e-13);
    }
}

TEST(Aklt, ChainReductionReproducesKnownSpectrum) {
    const auto mps = aklt_chain();
    ASSERT_EQ(mps.D(), 2);
    ASSERT_EQ(mps.d(), 3);
    Eigen::ComplexEigenSolver<Mat> es(test::kron_tm(mps, mps));
    std::vector<cplx>              ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return a.real() > b.real(); });
    const cplx l0 = ev[0];
    EXPECT_NEAR(std::abs(ev[0] / l0 - 1.0), 0.0, 1e-12);
    for(int i = 1; i < 4; ++i) EXPECT_NEAR(std::abs(ev[static_cast<std::size_t>(i)] / l0 + 1.0 / 3.0), 0.0, 1e-12);
}

TEST(Cylinder, MatrixFreeMatchesBruteForceRing) {
    const auto t = aklt_tensor(Lattice::square);
    const Mat  M = brute_force_ring(t, 3);
    const CylinderTm tm(t, 3);
    const Mat  A = krylov::materialize([&](const Vec &x, Vec &y) { tm.apply(x, y); }, tm.size());
    // the ring may be traversed in the opposite direction, so compare spectra
    Eigen::ComplexEigenSolver<Mat> ea(A), em(M);
    std::vector<cplx>              va(ea.eigenvalues().data(), ea.eigenvalues().data() + 64), vm(em.eigenvalues().data(), em.eigenvalues().data() + 64);
    const auto                     order = [](cplx a, cplx b) { return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag(); };
    std::sort(va.begin(), va.end(), order);
    std::sort(vm.begin(), vm.end(), order);
    for(std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(std::abs(va[i] - vm[i]), 0.0, 1e-10 * std::abs(vm[0]));
}

TEST(Cylinder, SectorSpectrumMatchesDenseOracle) {
    const auto t  = aklt_tensor(Lattice::square);
    const Mat  M  = brute_force_ring(t, 3);
    const auto dv = krylov::dense_eigs(M).values;
    RingSpectrumOptions o;
    o.dense_limit = 0; // force the Krylov path
    o.m           = 4;
    const auto rs = ring_tm_spectrum(t, 3, 0.0, o);
    EXPECT_NEAR(rs.lambda0, std::abs(dv(0)), 1e-10 * std::abs(dv(0)));
    std::size_t found = 0;
    for(const auto &sec : rs.sectors)
        for(const auto &lv : sec.levels) {
            const cplx lam = lv.lambda * rs.lambda0;
            EXPECT_LE((dv.array() - lam).abs().minCoeff(), 1e-10 * rs.lambda0);
            const auto copies = (dv.array() - lam).abs() < 1e-8 * rs.lambda0;
            EXPECT_GE(copies.count(), lv.degeneracy);
            ++found;
        }
    EXPECT_GT(found, 3U);
    EXPECT_LT(rs.max_imag, 1e-10);
    EXPECT_LT(rs.translation_residual, 1e-12);
}

TEST(Cylinder, TranslationAndMomentumProjection) {
    const CylinderTm tm(aklt_tensor(Lattice::square), 4);
    EXPECT_LT(tm.translation_residual(), 1e-12);
    Vec x = krylov::random_vector(tm.size(), 3), tx;
    tm.project_momentum(x, 1);
    tm.translate(x, tx);
    EXPECT_LT((tx - std::exp(I_unit * 2.0 * pi / 4.0) * x).norm(), 1e-12 * x.norm());
    for(Eigen::Index i = 0; i < tm.size(); i += 37) EXPECT_EQ(tm.charge(tm.translate_index(i)), tm.charge(i));
}

TEST(Cylinder, FullTwistIsPeriodic) {
    const auto t = aklt_tensor(Lattice::square);
    const auto a = ring_tm_spectrum(t, 3, 0.0), b = ring_tm_spectrum(t, 3, 2.0 * pi);
    ASSERT_EQ(a.sectors.size(), b.sectors.size());
    EXPECT_NEAR(a.lambda0, b.lambda0, 1e-10 * a.lambda0);
    EXPECT_EQ(CylinderTm(t, 3, 0.5).boundary(), Boundary::twisted);
}

TEST(Cylinder, SquareRingFourHasTripletAtMPoint) {
    const auto rs = ring_tm_spectrum(aklt_tensor(Lattice::square), 4);
    const auto cut = dispersion_cut({rs});
    ASSERT_EQ(cut.minima.size(), 1U);
    const auto &m = cut.minima.front();
    EXPECT_NEAR(m.kx, pi, 1e-12);
    EXPECT_NEAR(std::abs(m.ky), pi, 1e-12);
    EXPECT_EQ(m.degeneracy, 3);
    EXPECT_EQ(m.spin, 1);
    EXPECT_NEAR(cut.continuum.front(), 2 * m.eps, 1e-12);
}

TEST(Cylinder, HexagonalRingMinimumAtZeroMomentum) {
    const auto cut = dispersion_cut({ring_tm_spectrum(aklt_tensor(Lattice::hexagonal), 6)});
    ASSERT_EQ(cut.minima.size(), 1U);
    EXPECT_NEAR(cut.minima.front().kx, 0.0, 1e-12);
    EXPECT_NEAR(cut.minima.front().ky, 0.0, 1e-12);
}

TEST(Cylinder, RejectsUnsupportedShapes) {
    const auto t = aklt_tensor(Lattice::square);
    EXPECT_THROW(CylinderTm(t, 1), InvalidArgument);
    EXPECT_THROW(CylinderTm(t, 13), DimensionError);
    RingSpectrum incomplete;
    incomplete.ny = 4;
    EXPECT_THROW((void)dispersion_cut({incomplete}), InvalidArgument);
}
