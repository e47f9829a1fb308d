#include "mpstm/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace mpstm {

namespace {

    bool same_state(const UniformMps &a, const UniformMps &b) {
        if(&a == &b) return true;
        if(a.d() != b.d() || a.D() != b.D()) return false;
        return tensor_distance(a, b) == 0.0;
    }

    // Pair each right eigenvector with a left one and make the sets biorthonormal.
    double biorthogonalize(const Vec &lam_r, const Mat &R, const Vec &lam_l, Mat L, Eigen::Index Db, Eigen::Index Dk, Mat &out) {
        const Eigen::Index m = lam_r.size();
        std::vector<bool>  used(static_cast<std::size_t>(lam_l.size()), false);
        Mat                Lm(L.rows(), m);
        for(Eigen::Index i = 0; i < m; ++i) {
            Eigen::Index best = -1;
            double       bd   = 0;
            for(Eigen::Index k = 0; k < lam_l.size(); ++k) {
                if(used[static_cast<std::size_t>(k)]) continue;
                const double dist = std::abs(lam_l(k) - lam_r(i));
                if(best < 0 || dist < bd) {
                    best = k;
                    bd   = dist;
                }
            }
            used[static_cast<std::size_t>(best)] = true;
            Lm.col(i)                            = L.col(best);
        }
        Mat M(m, m);
        for(Eigen::Index a = 0; a < m; ++a)
            for(Eigen::Index b = 0; b < m; ++b) M(a, b) = tm_pair(Lm.col(a), R.col(b), Db, Dk);
        const Mat X = M.fullPivLu().inverse();
        out         = Lm * X.transpose();
        double res  = 0;
        for(Eigen::Index a = 0; a < m; ++a)
            for(Eigen::Index b = 0; b < m; ++b) res = std::max(res, std::abs(tm_pair(out.col(a), R.col(b), Db, Dk) - (a == b ? 1.0 : 0.0)));
        return res;
    }

} // namespace

void fill_polar(TmSpectrum &spec) {
    const Eigen::Index n = spec.eigenvalues.size();
    spec.eps.resize(n);
    spec.phi.resize(n);
    for(Eigen::Index j = 0; j < n; ++j) {
        spec.eps(j) = -std::log(std::abs(spec.eigenvalues(j)));
        spec.phi(j) = wrap_phase(std::arg(spec.eigenvalues(j)));
    }
}

TmSpectrum tm_spectrum(const UniformMps &bra, const UniformMps &ket, const SpectrumOptions &opt) {
    bra.validate();
    ket.validate();
    if(bra.d() != ket.d()) throw DimensionError("tm_spectrum: physical dimensions differ");
    TmSpectrum spec;
    spec.kind           = same_state(bra, ket) ? TmKind::regular : TmKind::mixed;
    spec.D_bra          = bra.D();
    spec.D_ket          = ket.D();
    const Eigen::Index n = bra.D() * ket.D();
    const Eigen::Index m = opt.m <= 0 ? n : opt.m;
    if(m > n) {
        std::ostringstream os;
        os << "tm_spectrum: requested " << m << " eigenpairs but the TM has dimension " << n;
        throw DimensionError(os.str());
    }

    if(opt.dense || n <= 64) {
        if(n > kDenseLimit) throw DimensionError("tm_spectrum: dense path limited to D_bra*D_ket <= 4096");
        const Mat                      T = dense_tm(bra, ket);
        Eigen::ComplexEigenSolver<Mat> es(T, true);
        Vec                            vals = es.eigenvalues();
        Eigen::VectorXi                perm;
        krylov::sort_spectrum(vals, perm);
        spec.eigenvalues = vals.head(m);
        spec.ritz_residuals = RVec::Zero(m);
        if(opt.vectors) {
            const Mat V    = es.eigenvectors();
            const Mat Vinv = V.fullPivLu().inverse();
            spec.right.resize(n, m);
            spec.left.resize(n, m);
            for(Eigen::Index i = 0; i < m; ++i) {
                const Eigen::Index k = perm(i);
                spec.right.col(i)    = V.col(k);
                spec.ritz_residuals(i) = (T * V.col(k) - vals(i) * V.col(k)).norm() / V.col(k).norm();
                // row k of V^{-1} is vec(L^T) for the pairing Tr(L R)
                const Vec w          = Vinv.row(k).transpose();
                const Mat Lt         = as_matrix(w, ket.D(), bra.D());
                spec.left.col(i)     = flatten(Lt.transpose());
            }
            double res = 0;
            for(Eigen::Index a = 0; a < m; ++a)
                for(Eigen::Index b = 0; b < m; ++b)
                    res = std::max(res, std::abs(tm_pair(spec.left.col(a), spec.right.col(b), bra.D(), ket.D()) - (a == b ? 1.0 : 0.0)));
            spec.biorth_residual = res;
        }
    } else {
        const Eigen::Index mx = std::min(n, m + 4);
        krylov::EigOptions eo;
        eo.nev          = static_cast<int>(mx);
        eo.tol          = opt.tol;
        eo.max_restarts = opt.max_restarts;
        eo.seed         = opt.seed;
        auto rr         = krylov::eigs(tm_operator(bra, ket, Direction::right), n, eo);
        spec.eigenvalues    = rr.values.head(m);
        spec.ritz_residuals = rr.residuals.head(m);
        if(opt.vectors) {
            spec.right = rr.vectors.leftCols(m);
            eo.seed    = opt.seed + 1;
            auto ll    = krylov::eigs(tm_operator(bra, ket, Direction::left), n, eo);
            spec.biorth_residual = biorthogonalize(spec.eigenvalues, spec.right, ll.values, ll.vectors, bra.D(), ket.D(), spec.left);
        }
    }

    if(spec.kind == TmKind::regular) {
        const cplx l0 = spec.eigenvalues(0);
        spec.scale    = std::abs(l0);
        spec.eigenvalues /= l0;
        spec.eigenvalues(0) = 1.0;
    }
    fill_polar(spec);
    return spec;
}

double conjugation_defect(const TmSpectrum &spec) {
    const Eigen::Index n = spec.size();
    if(n == 0) return 0;
    const double scale = std::abs(spec.eigenvalues(0));
    const double cut   = std::abs(spec.eigenvalues(n - 1));
    double       worst = 0;
    for(Eigen::Index j = 0; j < n; ++j) {
        const cplx z = spec.eigenvalues(j);
        if(std::abs(z.imag()) <= 1e-8 * scale) continue;
        if(std::abs(std::abs(z) - cut) <= 1e-8 * scale) continue;
        double best = std::numeric_limits<double>::infinity();
        for(Eigen::Index k = 0; k < n; ++k) best = std::min(best, std::abs(spec.eigenvalues(k) - std::conj(z)));
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace mpstm
