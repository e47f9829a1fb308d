#include "mpstm/canonical.hpp"

#include "mpstm/transfer.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace mpstm {

namespace {

    Mat dominant_vector(const UniformMps &mps, Direction dir, cplx &lambda) {
        const auto        D = mps.D();
        krylov::EigOptions opt;
        opt.nev              = 1;
        opt.tol              = 1e-13;
        opt.max_restarts     = 400;
        opt.throw_on_failure = false;
        opt.v0               = flatten(Mat::Identity(D, D));
        auto res             = krylov::eigs(tm_operator(mps, mps, dir), D * D, opt);
        lambda               = res.values(0);
        Mat v                = as_matrix(res.vectors.col(0), D, D);
        const cplx tr        = v.trace();
        v *= (std::abs(tr) > 0 ? std::conj(tr) / std::abs(tr) : cplx(1.0));
        v = 0.5 * (v + v.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(v, Eigen::EigenvaluesOnly);
        const double                       lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
        if(hi <= 0 || lo < -1e-8 * hi) throw InvalidArgument("dominant eigenvector not positive-definite: state is not injective");
        return v;
    }

    struct LeftForm {
        std::vector<Mat> AL;
        Mat              L; // L A^s = A_L^s L up to normalization
    };

    // Left-orthonormal form by iterated QR of L A; never inverts L.
    LeftForm left_orthonormalize(const std::vector<Mat> &A, const Mat &l) {
        const auto D = A.front().rows();
        const int  d = static_cast<int>(A.size());
        Eigen::SelfAdjointEigenSolver<Mat> es(l);
        RVec                               w = es.eigenvalues().cwiseMax(0.0);
        Mat L = w.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
        L /= L.norm();
        std::vector<Mat> AL(static_cast<std::size_t>(d), Mat(D, D));
        Mat              M(d * D, D);
        for(int it = 0; it < 5000; ++it) {
            for(int s = 0; s < d; ++s) M.middleRows(s * D, D).noalias() = L * A[static_cast<std::size_t>(s)];
            Eigen::HouseholderQR<Mat> qr(M);
            Mat Q = qr.householderQ() * Mat::Identity(d * D, D);
            Mat R = qr.matrixQR().topRows(D).triangularView<Eigen::Upper>();
            for(Eigen::Index i = 0; i < D; ++i) {
                const cplx   rii = R(i, i);
                const double a   = std::abs(rii);
                const cplx   ph  = a > 0 ? rii / a : cplx(1.0);
                R.row(i) *= std::conj(ph);
                Q.col(i) *= ph;
            }
            R /= R.norm();
            for(int s = 0; s < d; ++s) AL[static_cast<std::size_t>(s)] = Q.middleRows(s * D, D);
            const double delta = (R - L).norm();
            L                  = R;
            if(delta < 1e-14) break;
        }
        return {std::move(AL), std::move(L)};
    }

    std::vector<Mat> transposed(const std::vector<Mat> &A) {
        std::vector<Mat> t;
        for(const auto &a : A) t.push_back(a.transpose());
        return t;
    }

} // namespace

double gauge_residual(const UniformMps &mps, Gauge g) {
    mps.validate();
    const auto D = mps.D();
    Mat        acc = Mat::Zero(D, D);
    switch(g) {
        case Gauge::none: return 0.0;
        case Gauge::left:
            for(const auto &a : mps.A) acc += a.adjoint() * a;
            return (acc - Mat::Identity(D, D)).norm();
        case Gauge::right:
            for(const auto &a : mps.A) acc += a * a.adjoint();
            return (acc - Mat::Identity(D, D)).norm();
        case Gauge::mixed: {
            double left = gauge_residual(mps, Gauge::left);
            if(mps.schmidt.size() != D) return std::numeric_limits<double>::infinity();
            const Mat r = mps.schmidt.cwiseAbs2().cast<cplx>().asDiagonal();
            for(const auto &a : mps.A) acc += a * r * a.adjoint();
            return left + (acc - r).norm();
        }
    }
    return 0.0;
}

FixedPoints fixed_points(const UniformMps &mps) {
    mps.validate();
    const auto  D = mps.D();
    FixedPoints fp;
    if(mps.gauge == Gauge::mixed) {
        fp.l = Mat::Identity(D, D);
        fp.r = mps.schmidt.cwiseAbs2().cast<cplx>().asDiagonal();
    } else {
        cplx lr = 1.0, ll = 1.0;
        fp.l    = mps.gauge == Gauge::left ? Mat::Identity(D, D) : dominant_vector(mps, Direction::left, ll);
        fp.r    = mps.gauge == Gauge::right ? Mat::Identity(D, D) : dominant_vector(mps, Direction::right, lr);
        fp.lambda0 = mps.gauge == Gauge::right ? ll : lr;
    }
    const cplx n = (fp.l * fp.r).trace();
    fp.r /= n;
    return fp;
}

double injectivity_ratio(const UniformMps &mps) {
    const auto D = mps.D();
    if(D == 1) return 0.0;
    krylov::EigOptions opt;
    opt.nev              = 2;
    opt.tol              = 1e-10;
    opt.max_restarts     = 200;
    opt.throw_on_failure = false;
    auto res             = krylov::eigs(tm_operator(mps, mps, Direction::right), D * D, opt);
    return std::abs(res.values(1)) / std::abs(res.values(0));
}

UniformMps canonicalize(const UniformMps &input, Gauge target) {
    input.validate();
    const auto D = input.D();
    UniformMps mps = input;

    // rescale to spectral radius 1 and get the left fixed point
    cplx lam = 1.0;
    Mat  l   = dominant_vector(mps, Direction::left, lam);
    for(auto &a : mps.A) a /= std::sqrt(std::abs(lam));

    UniformMps out;
    if(target == Gauge::none) {
        out       = mps;
        out.gauge = Gauge::none;
    } else if(target == Gauge::right) {
        cplx       lr = 1.0;
        UniformMps t(transposed(mps.A));
        const Mat  lt = dominant_vector(t, Direction::left, lr);
        out           = UniformMps(transposed(left_orthonormalize(t.A, lt).AL), Gauge::right);
    } else {
        LeftForm lf = left_orthonormalize(mps.A, l);
        out         = UniformMps(lf.AL, Gauge::left);
        if(target == Gauge::mixed) {
            // right square root from the transposed tensors: A^s R = R A_R^s with R = L_t^T
            cplx       lr = 1.0;
            UniformMps t(transposed(mps.A));
            const Mat  lt = dominant_vector(t, Direction::left, lr);
            const Mat  R  = left_orthonormalize(t.A, lt).L.transpose();
            // C = L R satisfies A_L C = C A_R; its singular values are the Schmidt values
            Eigen::JacobiSVD<Mat> svd(lf.L * R, Eigen::ComputeFullU);
            Mat                   U = svd.matrixU();
            for(Eigen::Index i = 0; i < D; ++i) {
                // deterministic phase: largest component real positive
                Eigen::Index imax = 0;
                U.col(i).cwiseAbs().maxCoeff(&imax);
                U.col(i) *= std::conj(U(imax, i)) / std::abs(U(imax, i));
            }
            for(auto &a : out.A) a = (U.adjoint() * a * U).eval();
            out.gauge   = Gauge::mixed;
            out.schmidt = svd.singularValues() / svd.singularValues().norm();
        }
    }
    out.lambda1   = injectivity_ratio(out);
    out.injective = out.lambda1 < 1.0 - kInjectivityMargin;
    return out;
}

} // namespace mpstm
