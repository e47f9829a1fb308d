#include "mpstm/itebd.hpp"

#include "mpstm/canonical.hpp"
#include "mpstm/expectation.hpp"
#include "mpstm/krylov.hpp"
#include "mpstm/transfer.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace mpstm {

Mat imaginary_time_gate(const Mat &h, double tau) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const RVec                         w = (-tau * es.eigenvalues().array()).exp();
    return es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

    // Two-site unit cell in right-canonical (Hastings) form.
    // B[i][s] maps the bond left of site i to the bond right of it; lam[i] lives right of site i.
    struct Cell {
        int              d = 2;
        std::vector<Mat> B[2];
        RVec             lam[2];
    };

    std::vector<Mat> pair_products(const Cell &c, int i) {
        const int        j = 1 - i;
        std::vector<Mat> P;
        P.reserve(static_cast<std::size_t>(c.d * c.d));
        for(int s = 0; s < c.d; ++s)
            for(int t = 0; t < c.d; ++t) P.push_back(c.B[i][static_cast<std::size_t>(s)] * c.B[j][static_cast<std::size_t>(t)]);
        return P;
    }

    std::vector<Mat> apply_gate(const Mat &G, const std::vector<Mat> &P) {
        std::vector<Mat> out(P.size(), Mat::Zero(P[0].rows(), P[0].cols()));
        for(std::size_t a = 0; a < P.size(); ++a)
            for(std::size_t b = 0; b < P.size(); ++b) {
                const cplx g = G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                if(g != cplx(0)) out[a] += g * P[b];
            }
        return out;
    }

    double bond_energy(const Cell &c, int i, const Mat &h) {
        const RVec &lam = c.lam[1 - i];
        auto        P   = pair_products(c, i);
        for(auto &p : P) p = lam.cast<cplx>().asDiagonal() * p;
        auto   HP  = apply_gate(h, P);
        cplx   num = 0;
        double den = 0;
        for(std::size_t a = 0; a < P.size(); ++a) {
            num += P[a].cwiseProduct(HP[a].conjugate()).sum();
            den += P[a].squaredNorm();
        }
        return std::conj(num).real() / den;
    }

    Eigen::Index choose_chi(const RVec &S, Eigen::Index D, const ItebdOptions &opt) {
        Eigen::Index n = 0;
        while(n < S.size() && S(n) > opt.svd_cutoff * S(0)) ++n;
        n                = std::max<Eigen::Index>(n, 1);
        Eigen::Index chi = std::min(D, n);
        if(chi < n)
            while(chi > 1 && (S(chi - 1) - S(chi)) <= opt.degeneracy_tol * S(chi - 1)) --chi;
        return chi;
    }

    void update_bond(Cell &c, int i, const Mat &G, Eigen::Index D, const ItebdOptions &opt) {
        const int          j  = 1 - i;
        const int          d  = c.d;
        const Eigen::Index Dl = c.lam[j].size();
        const Eigen::Index Dr = c.B[j][0].cols();
        auto               Pg = apply_gate(G, pair_products(c, i));
        Mat                Phi(Dl * d, d * Dr);
        for(int s = 0; s < d; ++s)
            for(int t = 0; t < d; ++t) {
                const Mat &p = Pg[static_cast<std::size_t>(s * d + t)];
                for(Eigen::Index a = 0; a < Dl; ++a) Phi.block(a * d + s, t * Dr, 1, Dr) = p.row(a);
            }
        Mat Theta = Phi;
        for(Eigen::Index a = 0; a < Dl; ++a) Theta.middleRows(a * d, d) *= c.lam[j](a);

        Eigen::BDCSVD<Mat> svd(Theta, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const RVec        &S   = svd.singularValues();
        const Eigen::Index chi = choose_chi(S, D, opt);
        const double       nrm = S.head(chi).norm();
        const Mat          V   = svd.matrixV().leftCols(chi);

        const Mat Bi = Phi * V / nrm;
        for(int s = 0; s < d; ++s) {
            Mat m(Dl, chi);
            for(Eigen::Index a = 0; a < Dl; ++a) m.row(a) = Bi.row(a * d + s);
            c.B[i][static_cast<std::size_t>(s)] = m;
            c.B[j][static_cast<std::size_t>(s)] = V.middleRows(s * Dr, Dr).adjoint();
        }
        c.lam[i] = S.head(chi) / nrm;
    }

    double sweep(Cell &c, const Mat &g_half, const Mat &g_full, const Mat &h, Eigen::Index D, const ItebdOptions &opt) {
        update_bond(c, 0, g_half, D, opt);
        update_bond(c, 1, g_full, D, opt);
        update_bond(c, 0, g_half, D, opt);
        return 0.5 * (bond_energy(c, 0, h) + bond_energy(c, 1, h));
    }

    // Trim the larger bond so both sublattice bonds have equal dimension.
    void equalize(Cell &c) {
        const Eigen::Index Da = c.lam[0].size(), Db = c.lam[1].size(), m = std::min(Da, Db);
        for(int s = 0; s < c.d; ++s) {
            auto &A = c.B[0][static_cast<std::size_t>(s)];
            auto &B = c.B[1][static_cast<std::size_t>(s)];
            A       = A.topLeftCorner(m, m).eval();
            B       = B.topLeftCorner(m, m).eval();
        }
        c.lam[0] = c.lam[0].head(m).normalized();
        c.lam[1] = c.lam[1].head(m).normalized();
    }

    // One-site tensor M with B_A = M V^dag and B_B = V M; V from the fixed point of X -> sum C2 X C1^dag.
    UniformMps symmetrize(const Cell &c, double &overlap) {
        const int          d = c.d;
        const Eigen::Index D = c.lam[0].size();
        std::vector<Mat>   C1, C2;
        for(int s = 0; s < d; ++s)
            for(int t = 0; t < d; ++t) {
                C1.push_back(c.B[0][static_cast<std::size_t>(s)] * c.B[1][static_cast<std::size_t>(t)]);
                C2.push_back(c.B[1][static_cast<std::size_t>(s)] * c.B[0][static_cast<std::size_t>(t)]);
            }
        UniformMps         bra(C1), ket(C2);
        krylov::EigOptions eo;
        eo.nev              = 1;
        eo.tol              = 1e-12;
        eo.throw_on_failure = false;
        eo.v0               = flatten(Mat::Identity(D, D));
        auto res            = krylov::eigs(tm_operator(bra, ket, Direction::right), D * D, eo);
        overlap             = std::abs(res.values(0));
        if(overlap < 1.0 - 1e-6) {
            std::ostringstream os;
            os << "iTEBD state is not one-site translation invariant (sublattice overlap " << overlap << ")";
            throw InvalidArgument(os.str());
        }
        const Mat          X = as_matrix(res.vectors.col(0), D, D);
        Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Mat          V = svd.matrixU() * svd.matrixV().adjoint();

        std::vector<Mat> M1, M2;
        cplx             ov = 0;
        for(int s = 0; s < d; ++s) {
            M1.push_back(c.B[0][static_cast<std::size_t>(s)] * V);
            M2.push_back(V.adjoint() * c.B[1][static_cast<std::size_t>(s)]);
            ov += M1.back().cwiseProduct(M2.back().conjugate()).sum();
        }
        const cplx       ph = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0);
        std::vector<Mat> M;
        for(int s = 0; s < d; ++s) M.push_back(0.5 * (M1[static_cast<std::size_t>(s)] + ph * M2[static_cast<std::size_t>(s)]));
        return UniformMps(std::move(M));
    }

} // namespace

ItebdResult itebd_ground_state(const TwoSiteHamiltonian &h, Eigen::Index D, const ItebdOptions &opt) {
    if(D < 1) throw InvalidArgument("itebd_ground_state: D must be >= 1");
    if(opt.schedule.empty()) throw InvalidArgument("itebd_ground_state: empty schedule");
    for(std::size_t i = 1; i < opt.schedule.size(); ++i)
        if(!(opt.schedule[i].dt < opt.schedule[i - 1].dt)) throw InvalidArgument("itebd_ground_state: schedule must be strictly decreasing in dt");
    const int d = h.d;

    Cell c;
    c.d = d;
    if(opt.initial.size() > 0) {
        if(opt.initial.size() != d) throw DimensionError("itebd_ground_state: initial vector must have length d");
        const Vec v0 = opt.initial / opt.initial.norm();
        for(int i = 0; i < 2; ++i) {
            for(int s = 0; s < d; ++s) c.B[i].push_back(Mat::Constant(1, 1, v0(s)));
            c.lam[i] = RVec::Ones(1);
        }
    } else {
        // Random D x D cell; the first sweeps restore the canonical form.
        std::uint64_t seed = opt.seed;
        for(int i = 0; i < 2; ++i) {
            for(int s = 0; s < d; ++s) {
                const Vec r = krylov::random_vector(D * D, seed++);
                c.B[i].push_back(as_matrix(r, D, D) / std::sqrt(double(d * D)));
            }
            c.lam[i] = RVec::Constant(D, 1.0 / std::sqrt(double(D)));
        }
    }

    ItebdResult out;
    double      e_prev = 0.5 * (bond_energy(c, 0, h.h) + bond_energy(c, 1, h.h));
    for(std::size_t st = 0; st < opt.schedule.size(); ++st) {
        const auto  &stage  = opt.schedule[st];
        const Mat    g_half = imaginary_time_gate(h.h, 0.5 * stage.dt);
        const Mat    g_full = imaginary_time_gate(h.h, stage.dt);
        StageReport  rep;
        rep.dt = stage.dt;
        for(int k = 0; k < stage.sweeps; ++k) {
            const double e = sweep(c, g_half, g_full, h.h, D, opt);
            if(opt.record_history) out.history.push_back(e);
            rep.drift = std::abs(e - e_prev) / stage.dt;
            rep.sweeps = k + 1;
            e_prev     = e;
            if(k >= 4 && rep.drift < stage.tol) {
                rep.converged = true;
                break;
            }
        }
        out.stages.push_back(rep);
        if(!rep.converged && st + 1 == opt.schedule.size()) {
            std::ostringstream os;
            os << "iTEBD did not converge at dt=" << stage.dt << " within " << stage.sweeps << " sweeps; last energy drift " << rep.drift;
            throw ConvergenceError(os.str(), rep.drift);
        }
    }

    equalize(c);
    out.mps    = canonicalize(symmetrize(c, out.symmetrization_overlap), Gauge::mixed);
    out.energy = energy_density(out.mps, h);
    return out;
}

} // namespace mpstm
