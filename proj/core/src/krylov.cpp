#include "mpstm/krylov.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace mpstm::krylov {

namespace {

    constexpr double kTieRel = 1e-9;

    // true if a should come strictly before b
    bool precedes(cplx a, cplx b, double scale) {
        const double ma = std::abs(a), mb = std::abs(b);
        if(std::abs(ma - mb) > kTieRel * scale) return ma > mb;
        return wrap_phase(std::arg(a)) < wrap_phase(std::arg(b)) - 1e-14;
    }

    // Swap adjacent diagonal entries p, p+1 of an upper-triangular T; accumulate into Q.
    void swap_schur(Mat &T, Mat &Q, Eigen::Index p) {
        const cplx a = T(p, p), b = T(p + 1, p + 1), t = T(p, p + 1);
        cplx       v1 = t, v2 = b - a;
        double     nv = std::sqrt(std::norm(v1) + std::norm(v2));
        if(nv == 0) return;
        v1 /= nv;
        v2 /= nv;
        Eigen::Matrix2cd G;
        G << v1, -std::conj(v2), v2, std::conj(v1);
        const Eigen::Index m = T.rows();
        T.middleRows(p, 2) = (G.adjoint() * T.middleRows(p, 2)).eval();
        T.middleCols(p, 2) = (T.middleCols(p, 2) * G).eval();
        Q.middleCols(p, 2) = (Q.middleCols(p, 2) * G).eval();
        T(p + 1, p) = 0;
        (void) m;
    }

    void order_schur(Mat &T, Mat &Q) {
        const Eigen::Index m     = T.rows();
        double             scale = 0;
        for(Eigen::Index i = 0; i < m; ++i) scale = std::max(scale, std::abs(T(i, i)));
        if(scale == 0) scale = 1;
        // insertion sort by adjacent swaps
        for(Eigen::Index i = 1; i < m; ++i)
            for(Eigen::Index j = i; j > 0 && precedes(T(j, j), T(j - 1, j - 1), scale); --j) swap_schur(T, Q, j - 1);
    }

    // Eigenvector of upper-triangular T for diagonal entry i (unit norm).
    Vec triangular_eigvec(const Mat &T, Eigen::Index i) {
        Vec        y     = Vec::Zero(T.rows());
        const cplx lam   = T(i, i);
        double     scale = T.cwiseAbs().maxCoeff();
        y(i)             = 1.0;
        for(Eigen::Index j = i - 1; j >= 0; --j) {
            cplx s = 0;
            for(Eigen::Index l = j + 1; l <= i; ++l) s += T(j, l) * y(l);
            cplx den = T(j, j) - lam;
            if(std::abs(den) < 1e-14 * scale) den = 1e-14 * scale;
            y(j) = -s / den;
        }
        return y / y.norm();
    }

    // Orthogonalize w against the first k columns of V (two passes). Returns coefficients.
    Vec orthogonalize(const Mat &V, Eigen::Index k, Vec &w) {
        Vec h = V.leftCols(k).adjoint() * w;
        w.noalias() -= V.leftCols(k) * h;
        Vec h2 = V.leftCols(k).adjoint() * w;
        w.noalias() -= V.leftCols(k) * h2;
        return h + h2;
    }

} // namespace

Vec random_vector(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64                  rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec                              v(n);
    for(Eigen::Index i = 0; i < n; ++i) {
        const double re = nd(rng);
        const double im = nd(rng);
        v(i)            = cplx(re, im);
    }
    return v;
}

void sort_spectrum(Vec &values, Eigen::VectorXi &perm) {
    const Eigen::Index n = values.size();
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), 0);
    if(n == 0) return;
    std::vector<int> idx(perm.begin(), perm.end());
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return std::abs(values(a)) > std::abs(values(b)); });
    const double scale = std::max(std::abs(values(idx[0])), 1e-300);
    // phase ordering inside magnitude-tied groups
    std::size_t start = 0;
    while(start < idx.size()) {
        std::size_t end = start + 1;
        while(end < idx.size() && std::abs(std::abs(values(idx[end - 1])) - std::abs(values(idx[end]))) <= kTieRel * scale) ++end;
        std::stable_sort(idx.begin() + static_cast<long>(start), idx.begin() + static_cast<long>(end),
                         [&](int a, int b) { return wrap_phase(std::arg(values(a))) < wrap_phase(std::arg(values(b))); });
        start = end;
    }
    Vec sorted(n);
    for(Eigen::Index i = 0; i < n; ++i) {
        perm(i)   = idx[static_cast<std::size_t>(i)];
        sorted(i) = values(perm(i));
    }
    values = sorted;
}

Mat materialize(const LinearOp &op, Eigen::Index n) {
    Mat a(n, n);
    Vec e = Vec::Zero(n), y(n);
    for(Eigen::Index j = 0; j < n; ++j) {
        e.setZero();
        e(j) = 1.0;
        op(e, y);
        a.col(j) = y;
    }
    return a;
}

EigResult dense_eigs(const Mat &a, int nev) {
    Eigen::ComplexEigenSolver<Mat> es(a, true);
    if(es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0);
    Vec             vals = es.eigenvalues();
    Eigen::VectorXi perm;
    sort_spectrum(vals, perm);
    const Eigen::Index k = (nev < 0) ? a.rows() : std::min<Eigen::Index>(nev, a.rows());
    EigResult          r;
    r.values  = vals.head(k);
    r.vectors = Mat(a.rows(), k);
    r.residuals.resize(k);
    for(Eigen::Index i = 0; i < k; ++i) {
        Vec v        = es.eigenvectors().col(perm(i));
        v           /= v.norm();
        r.vectors.col(i) = v;
        r.residuals(i)   = (a * v - r.values(i) * v).norm();
    }
    r.converged = true;
    return r;
}

EigResult eigs(const LinearOp &op, Eigen::Index n, const EigOptions &opt) {
    if(n <= 0) throw DimensionError("eigs: empty operator");
    if(opt.nev < 1 || opt.nev > n) {
        std::ostringstream os;
        os << "eigs: requested " << opt.nev << " eigenpairs of an operator of dimension " << n;
        throw DimensionError(os.str());
    }
    LinearOp A = op;
    if(opt.project) {
        A = [&op, &opt](const Vec &x, Vec &y) {
            op(x, y);
            opt.project(y);
        };
    }
    if(n <= opt.dense_below) return dense_eigs(materialize(A, n), opt.nev);

    const Eigen::Index nev = opt.nev;
    Eigen::Index       ncv = opt.ncv > 0 ? opt.ncv : std::max<Eigen::Index>(4 * nev, 40);
    ncv                    = std::min(ncv, n);
    if(ncv <= nev) ncv = std::min(n, nev + 2);

    Mat V = Mat::Zero(n, ncv + 1);
    Mat H = Mat::Zero(ncv + 1, ncv);

    std::uint64_t seed = opt.seed;
    Vec           v0   = opt.v0.size() == n ? opt.v0 : random_vector(n, seed++);
    if(opt.project) opt.project(v0);
    if(v0.norm() == 0) throw InvalidArgument("eigs: start vector vanishes after projection");
    V.col(0) = v0 / v0.norm();

    Eigen::Index k        = 0;    // number of locked Schur vectors carried into this cycle
    Eigen::Index m_eff    = ncv;  // shrinks if an invariant subspace exhausts the space
    Vec          w(n);
    EigResult    res;
    double       last_worst = 0;

    for(int restart = 0; restart <= opt.max_restarts; ++restart) {
        // expand the Arnoldi relation A V_m = V_{m+1} Hbar
        Eigen::Index j = k;
        for(; j < m_eff; ++j) {
            A(V.col(j), w);
            const double wn = w.norm();
            Vec          h  = orthogonalize(V, j + 1, w);
            H.block(0, j, j + 1, 1) += h;
            double beta = w.norm();
            if(beta <= 1e-12 * std::max(wn, 1e-300)) {
                // invariant subspace: continue with a fresh direction
                H(j + 1, j) = 0;
                bool found  = false;
                for(int attempt = 0; attempt < 3 && !found; ++attempt) {
                    Vec r = random_vector(n, seed++);
                    if(opt.project) opt.project(r);
                    orthogonalize(V, j + 1, r);
                    const double rn = r.norm();
                    if(rn > 1e-8) {
                        V.col(j + 1) = r / rn;
                        found        = true;
                    }
                }
                if(!found) {
                    m_eff = j + 1;
                    break;
                }
            } else {
                H(j + 1, j)  = beta;
                V.col(j + 1) = w / beta;
            }
        }
        const Eigen::Index m = m_eff;

        Eigen::ComplexSchur<Mat> cs(H.topLeftCorner(m, m), true);
        Mat                      T = cs.matrixT();
        Mat                      Q = cs.matrixU();
        order_schur(T, Q);

        const Eigen::Index want = std::min<Eigen::Index>(nev, m);
        Eigen::RowVectorXcd b   = H.block(m, 0, 1, m) * Q;
        const double        l0  = std::max(std::abs(T(0, 0)), 1e-300);
        RVec                resid(want);
        Mat                 Y(m, want);
        double              worst = 0;
        for(Eigen::Index i = 0; i < want; ++i) {
            Y.col(i) = triangular_eigvec(T, i);
            resid(i) = std::abs((b * Y.col(i))(0));
            worst    = std::max(worst, resid(i) / l0);
        }
        last_worst = worst;
        const bool done = worst <= opt.tol || m < ncv;
        if(done || restart == opt.max_restarts) {
            res.values.resize(want);
            res.vectors.resize(n, want);
            res.residuals = resid;
            for(Eigen::Index i = 0; i < want; ++i) {
                res.values(i)     = T(i, i);
                Vec x             = V.leftCols(m) * (Q * Y.col(i));
                res.vectors.col(i) = x / x.norm();
            }
            res.restarts  = restart;
            res.converged = done;
            break;
        }

        // Krylov-Schur restart: keep a leading invariant block of size k
        k = std::min<Eigen::Index>(m - 2, nev + (m - nev) / 2);
        k = std::max<Eigen::Index>(k, std::min<Eigen::Index>(nev, m - 1));
        while(k < m - 1 && std::abs(std::abs(T(k, k)) - std::abs(T(k - 1, k - 1))) <= 1e-6 * l0) ++k;
        Mat Vk               = V.leftCols(m) * Q.leftCols(k);
        V.leftCols(k)        = Vk;
        V.col(k)             = V.col(m);
        H.setZero();
        H.topLeftCorner(k, k) = T.topLeftCorner(k, k);
        H.block(k, 0, 1, k)   = b.head(k);
        m_eff                 = ncv;
    }

    if(!res.converged && opt.throw_on_failure) {
        std::ostringstream os;
        os << "Krylov-Schur did not converge in " << opt.max_restarts << " restarts; worst relative Ritz residual " << last_worst;
        throw ConvergenceError(os.str(), last_worst);
    }
    // final ordering with the canonical comparator
    Eigen::VectorXi perm;
    Vec             vals = res.values;
    sort_spectrum(vals, perm);
    Mat  vecs = res.vectors;
    RVec rr   = res.residuals;
    for(Eigen::Index i = 0; i < vals.size(); ++i) {
        res.vectors.col(i) = vecs.col(perm(i));
        res.residuals(i)   = rr(perm(i));
    }
    res.values = vals;
    return res;
}

GmresResult gmres(const LinearOp &op, const Vec &b, const Vec &x0, const GmresOptions &opt) {
    const Eigen::Index n  = b.size();
    GmresResult        r;
    r.x                   = x0.size() == n ? x0 : Vec::Zero(n);
    const double bnorm    = b.norm();
    if(bnorm == 0) {
        r.x.setZero();
        r.converged = true;
        return r;
    }
    const int m = std::max(1, opt.restart);
    Mat       V(n, m + 1);
    Mat       H = Mat::Zero(m + 1, m);
    Vec       cs(m), sn(m), g(m + 1), w(n), Ax(n);

    while(r.iterations < opt.max_iter) {
        op(r.x, Ax);
        Vec          res  = b - Ax;
        double       beta = res.norm();
        r.residual        = beta / bnorm;
        if(r.residual <= opt.tol) {
            r.converged = true;
            return r;
        }
        V.col(0) = res / beta;
        H.setZero();
        g.setZero();
        g(0)        = beta;
        int inner   = 0;
        for(; inner < m && r.iterations < opt.max_iter; ++inner, ++r.iterations) {
            op(V.col(inner), w);
            Vec h = V.leftCols(inner + 1).adjoint() * w;
            w.noalias() -= V.leftCols(inner + 1) * h;
            Vec h2 = V.leftCols(inner + 1).adjoint() * w;
            w.noalias() -= V.leftCols(inner + 1) * h2;
            h += h2;
            H.block(0, inner, inner + 1, 1) = h;
            const double hn                 = w.norm();
            H(inner + 1, inner)             = hn;
            if(hn > 0) V.col(inner + 1) = w / hn;
            for(int i = 0; i < inner; ++i) {
                const cplx t        = std::conj(cs(i)) * H(i, inner) + std::conj(sn(i)) * H(i + 1, inner);
                H(i + 1, inner)     = -sn(i) * H(i, inner) + cs(i) * H(i + 1, inner);
                H(i, inner)         = t;
            }
            const cplx   a   = H(inner, inner), bb = H(inner + 1, inner);
            const double den = std::sqrt(std::norm(a) + std::norm(bb));
            cs(inner)        = den == 0 ? cplx(1) : a / den;
            sn(inner)        = den == 0 ? cplx(0) : bb / den;
            H(inner, inner)  = std::conj(cs(inner)) * a + std::conj(sn(inner)) * bb;
            H(inner + 1, inner) = 0;
            g(inner + 1)     = -sn(inner) * g(inner);
            g(inner)         = std::conj(cs(inner)) * g(inner);
            r.residual       = std::abs(g(inner + 1)) / bnorm;
            if(r.residual <= opt.tol || hn == 0) {
                ++inner;
                ++r.iterations;
                break;
            }
        }
        Vec y = H.topLeftCorner(inner, inner).triangularView<Eigen::Upper>().solve(g.head(inner));
        r.x += V.leftCols(inner) * y;
    }
    op(r.x, Ax);
    r.residual  = (b - Ax).norm() / bnorm;
    r.converged = r.residual <= opt.tol;
    return r;
}

} // namespace mpstm::krylov
