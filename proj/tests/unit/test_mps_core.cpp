#include "test_util.hpp"

#include "mpstm/mps_io.hpp"
#include "mpstm/xy_exact.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

using namespace mpstm;

namespace {

std::vector<double> sorted_real_eigenvalues(const Mat &h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    std::vector<double>                 w(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return w;
}

} // namespace

TEST(Hamiltonian, BlbqMatchesTotalSpinSpectrum) {
    const double theta = std::atan(1.0 / 3.0);
    const auto   h     = build_hamiltonian(Model::BLBQ, {theta});
    ASSERT_EQ(h.d, 3);
    // S.S on two spin-1 sites is (J(J+1) - 4) / 2 with J = 0, 1, 2
    std::vector<double> expect;
    for(auto [x, mult] : {std::pair{-2.0, 1}, {-1.0, 3}, {1.0, 5}})
        for(int i = 0; i < mult; ++i) expect.push_back(std::cos(theta) * x + std::sin(theta) * x * x);
    std::sort(expect.begin(), expect.end());
    const auto got = sorted_real_eigenvalues(h.h);
    ASSERT_EQ(got.size(), expect.size());
    for(std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-12);
}

TEST(Hamiltonian, HermitianAndNamedForEveryModel) {
    for(auto [m, p] : {std::pair{Model::XY, std::vector<double>{0.3, 0.2}},
                       {Model::XXZ, {0.5, 0.1}},
                       {Model::BLBQ, {0.15652 * pi}},
                       {Model::FIELD_ONLY, {1.0}}}) {
        const auto h = build_hamiltonian(m, p);
        EXPECT_LT(hermiticity_defect(h.h), 1e-14) << h.name();
        EXPECT_EQ(parse_model(model_name(m)), m);
        EXPECT_EQ(h.h.rows(), h.d * h.d);
    }
}

TEST(Hamiltonian, RejectsWrongParameterCount) {
    EXPECT_THROW((void)build_hamiltonian(Model::XY, {0.3}), InvalidArgument);
    EXPECT_THROW((void)build_hamiltonian(Model::BLBQ, {}), InvalidArgument);
}

TEST(Canonical, LeftGaugeResidualOfRandomState) {
    const auto mps = canonicalize(random_mps(4, 2, 11), Gauge::left);
    EXPECT_LE(gauge_residual(mps, Gauge::left), 1e-10);
}

TEST(Canonical, PropertyGaugesAndSpectralRadius) {
    for(std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Eigen::Index D   = 2 + static_cast<Eigen::Index>(seed % 5);
        const int          d   = 2 + static_cast<int>(seed % 2);
        const auto         raw = random_mps(D, d, seed);
        for(Gauge g : {Gauge::left, Gauge::right, Gauge::mixed}) {
            const auto mps = canonicalize(raw, g);
            EXPECT_LE(gauge_residual(mps, g), 1e-10) << gauge_name(g) << " seed " << seed;
            const auto ev = krylov::dense_eigs(test::kron_tm(mps, mps), 1);
            EXPECT_NEAR(std::abs(ev.values(0)), 1.0, 1e-10);
        }
        const auto mixed = canonicalize(raw, Gauge::mixed);
        EXPECT_NEAR(mixed.schmidt.norm(), 1.0, 1e-12);
        for(Eigen::Index i = 1; i < mixed.schmidt.size(); ++i) EXPECT_GE(mixed.schmidt(i - 1), mixed.schmidt(i));
        EXPECT_LT(mixed.lambda1, 1.0);
    }
}

TEST(Canonical, DetectsNonInjectiveDirectSum) {
    // two decoupled copies of the same state: the dominant eigenvalue is twofold
    const auto       a = canonicalize(random_mps(2, 2, 5));
    std::vector<Mat> blocks;
    for(const auto &m : a.A) {
        Mat b                     = Mat::Zero(4, 4);
        b.topLeftCorner(2, 2)     = m;
        b.bottomRightCorner(2, 2) = m;
        blocks.push_back(b);
    }
    const auto c = canonicalize(UniformMps(blocks));
    EXPECT_FALSE(c.injective);
    EXPECT_GT(injectivity_ratio(c), 1.0 - 1e-8);
}

TEST(Transfer, MatrixFreeMatchesKroneckerOracle) {
    const auto bra = random_mps(3, 2, 21), ket = random_mps(3, 2, 22);
    const Mat  T   = test::kron_tm(bra, ket);
    for(std::uint64_t s = 0; s < 3; ++s) {
        const Vec v = krylov::random_vector(9, 100 + s);
        EXPECT_LE((apply_tm(bra, ket, Direction::right, v) - T * v).norm(), 1e-12 * v.norm() * T.norm());
        // left vectors pair through Tr(L R), so the left action is T^T on the transposed matrix
        const Mat lt = as_matrix(Vec(T.transpose() * flatten(as_matrix(v, 3, 3).transpose())), 3, 3).transpose();
        EXPECT_LE((apply_tm(bra, ket, Direction::left, v) - flatten(lt)).norm(), 1e-12 * v.norm() * T.norm());
    }
    EXPECT_LE((dense_tm(bra, ket) - T).norm(), 1e-12 * T.norm());
}

TEST(Transfer, LeftAndRightActionsAreTransposed) {
    const auto bra = random_mps(3, 3, 31), ket = random_mps(4, 3, 32);
    const Vec  l   = krylov::random_vector(12, 1), r = krylov::random_vector(12, 2);
    const cplx a   = tm_pair(apply_tm(bra, ket, Direction::left, l), r, 3, 4);
    const cplx b   = tm_pair(l, apply_tm(bra, ket, Direction::right, r), 3, 4);
    EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(a));
}

TEST(Transfer, RejectsMismatchedPhysicalDimension) {
    const auto a = random_mps(2, 2, 1), b = random_mps(2, 3, 2);
    EXPECT_THROW((void)apply_tm(a, b, Direction::right, Vec::Zero(4)), DimensionError);
}

TEST(Symmetry, NonUnitaryRejected) {
    const auto mps = random_mps(2, 2, 3);
    EXPECT_THROW((void)apply_symmetry(mps, 2.0 * Mat::Identity(2, 2)), InvalidArgument);
}

TEST(Itebd, ParamagneticXyEnergyMatchesFreeFermions) {
    const auto   h = build_hamiltonian(Model::XY, {0.5, 1.05});
    const auto  &mps = test::xy_state(0.5, 1.05, 16);
    const double e   = energy_density(mps, h);
    EXPECT_NEAR(e, xy_ground_energy({0.5, 1.05}), 1e-4);
    EXPECT_LE(gauge_residual(mps, Gauge::mixed), 1e-8);
    EXPECT_TRUE(mps.injective);
}

TEST(Itebd, BrokenPhaseOrderParameterAndPartner) {
    const auto &mps = test::xy_state(0.3, 0.2, 8);
    const auto  sp  = spin::spin_ops(1);
    const cplx  mx  = expectation(mps, SiteOperator(1, sp.sx));
    EXPECT_GT(std::abs(mx), 0.1);

    const auto partner = apply_symmetry(mps, 2.0 * sp.sz);
    EXPECT_NEAR(expectation(partner, SiteOperator(1, sp.sx)).real(), -mx.real(), 1e-10);
    const auto ev = krylov::dense_eigs(test::kron_tm(mps, partner), 1);
    EXPECT_LT(std::abs(ev.values(0)), 1.0 - 1e-3);
}

TEST(Itebd, RejectsBadArguments) {
    const auto   h = build_hamiltonian(Model::XY, {0.5, 1.05});
    ItebdOptions o;
    EXPECT_THROW((void)itebd_ground_state(h, 0, o), InvalidArgument);
    o.initial = Vec::Ones(3);
    EXPECT_THROW((void)itebd_ground_state(h, 4, o), DimensionError);
    ItebdOptions bad;
    bad.schedule = {{0.01, 10, 1e-10}, {0.1, 10, 1e-10}};
    EXPECT_THROW((void)itebd_ground_state(h, 4, bad), InvalidArgument);
}

TEST(Itebd, ExhaustedBudgetThrowsConvergenceError) {
    const auto   h = build_hamiltonian(Model::XY, {0.5, 1.05});
    ItebdOptions o;
    o.schedule = {{0.1, 3, 1e-14}};
    EXPECT_THROW((void)itebd_ground_state(h, 4, o), ConvergenceError);
}

TEST(Itebd, AkltPointReachedFromRandomStart) {
    // at tan(theta) = 1/3 the bond term is cos(theta) (2 P_2 - 2/3) and the AKLT state is annihilated by P_2
    const double theta = std::atan(1.0 / 3.0);
    const auto   r     = itebd_ground_state(build_hamiltonian(Model::BLBQ, {theta}), 4, {});
    EXPECT_NEAR(r.energy, -2.0 / 3.0 * std::cos(theta), 1e-8);
    for(Eigen::Index i = 2; i < r.mps.schmidt.size(); ++i) EXPECT_LT(r.mps.schmidt(i), 1e-6);
    EXPECT_TRUE(r.mps.injective);
    EXPECT_NEAR(r.mps.lambda1, 1.0 / 3.0, 1e-6);
}

TEST(Expectation, ProductStateValues) {
    Vec v(2);
    v << std::cos(0.3), std::sin(0.3);
    const auto mps = product_mps(v);
    const auto sp  = spin::spin_ops(1);
    EXPECT_NEAR(expectation(mps, SiteOperator(1, sp.sz)).real(), 0.5 * std::cos(0.6), 1e-14);
    EXPECT_NEAR(expectation(mps, SiteOperator(1, sp.sx)).real(), 0.5 * std::sin(0.6), 1e-14);
    const auto h = build_hamiltonian(Model::FIELD_ONLY, {1.0});
    EXPECT_NEAR(energy_density(mps, h), -0.5 * std::cos(0.6), 1e-14);
}

TEST(Expectation, ReducedDensityMatrixIsAState) {
    const auto mps = test::random_injective(3, 2, 41);
    for(int n = 1; n <= 3; ++n) {
        const Mat rho = reduced_density_matrix(mps, n);
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
        EXPECT_LT((rho - rho.adjoint()).norm(), 1e-12);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat>(rho).eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(MpsIo, RoundTripKeepsTensorAndMetadata) {
    const auto            mps  = test::random_injective(3, 2, 51);
    const auto            path = (std::filesystem::temp_directory_path() / "mpstm_io_roundtrip.umps").string();
    io::MpsMetadata       meta;
    meta.model  = "XY";
    meta.params = {0.3, 0.2};
    meta.D      = mps.D();
    meta.gauge  = gauge_name(mps.gauge);
    meta.energy = -0.25;
    meta.schmidt.assign(mps.schmidt.data(), mps.schmidt.data() + mps.schmidt.size());
    io::save_umps(path, mps, meta);
    io::MpsMetadata back;
    const auto      loaded = io::load_umps(path, &back);
    EXPECT_EQ(tensor_distance(mps, loaded), 0.0);
    EXPECT_EQ(loaded.gauge, mps.gauge);
    EXPECT_EQ(back.model, "XY");
    EXPECT_EQ(back.params, meta.params);
    EXPECT_EQ(back.schmidt, meta.schmidt);
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".json");
}

TEST(MpsIo, CorruptFileRejected) {
    std::istringstream is("NOTUMPS");
    EXPECT_THROW((void)io::read_umps(is), Error);
}
