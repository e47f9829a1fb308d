#include "mpstm/exact_diag.hpp"

#include "mpstm/krylov.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace mpstm {

namespace {

    struct Basis {
        int                    L = 0, d = 2;
        long long              dim = 0;
        std::vector<long long> pw;     // d^j
        std::vector<long long> rep;    // orbit representative of each configuration
        std::vector<int>       shift;  // s = T^shift rep
        std::vector<int>       period; // orbit length, stored at the representative

        [[nodiscard]] int digit(long long s, int j) const { return static_cast<int>((s / pw[static_cast<std::size_t>(j)]) % d); }
        // site j -> j + 1 (mod L)
        [[nodiscard]] long long translate(long long s) const {
            const long long top = s / pw[static_cast<std::size_t>(L - 1)];
            return (s - top * pw[static_cast<std::size_t>(L - 1)]) * d + top;
        }
    };

    Basis make_basis(int d, int L) {
        if(L < 2) throw InvalidArgument("ed: need L >= 2");
        Basis b;
        b.L = L;
        b.d = d;
        b.pw.resize(static_cast<std::size_t>(L) + 1);
        b.pw[0] = 1;
        for(int j = 1; j <= L; ++j) {
            b.pw[static_cast<std::size_t>(j)] = b.pw[static_cast<std::size_t>(j - 1)] * d;
            if(b.pw[static_cast<std::size_t>(j)] > kEdMaxDim) {
                std::ostringstream os;
                os << "ed: dimension " << d << "^" << L << " exceeds the cap " << kEdMaxDim;
                throw DimensionError(os.str());
            }
        }
        b.dim = b.pw[static_cast<std::size_t>(L)];
        const auto n = static_cast<std::size_t>(b.dim);
        b.rep.assign(n, -1);
        b.shift.assign(n, 0);
        b.period.assign(n, 0);
        for(long long s = 0; s < b.dim; ++s) {
            if(b.rep[static_cast<std::size_t>(s)] >= 0) continue;
            // walk the orbit of s: orbit[t] = T^t s
            std::vector<long long> orbit{s};
            for(long long c = b.translate(s); c != s; c = b.translate(c)) orbit.push_back(c);
            const int  R    = static_cast<int>(orbit.size());
            const auto it   = std::min_element(orbit.begin(), orbit.end());
            const long long r  = *it;
            const int       t0 = static_cast<int>(it - orbit.begin()); // r = T^t0 s
            for(int t = 0; t < R; ++t) {
                // orbit[t] = T^t s = T^(t - t0) r
                const auto c             = static_cast<std::size_t>(orbit[static_cast<std::size_t>(t)]);
                b.rep[c]                 = r;
                b.shift[c]               = ((t - t0) % R + R) % R;
            }
            b.period[static_cast<std::size_t>(r)] = R;
        }
        return b;
    }

    // nonzero entries h(b, a) grouped by column a
    std::vector<std::vector<std::pair<int, cplx>>> bond_columns(const TwoSiteHamiltonian &h) {
        const int                                      d2 = h.d * h.d;
        std::vector<std::vector<std::pair<int, cplx>>> cols(static_cast<std::size_t>(d2));
        for(int a = 0; a < d2; ++a)
            for(int b = 0; b < d2; ++b)
                if(std::abs(h.h(b, a)) > 0) cols[static_cast<std::size_t>(a)].emplace_back(b, h.h(b, a));
        return cols;
    }

    template<typename F>
    void for_each_hop(const Basis &B, const std::vector<std::vector<std::pair<int, cplx>>> &cols, long long s, F &&f) {
        for(int j = 0; j < B.L; ++j) {
            const int jn = (j + 1) % B.L;
            const int cj = B.digit(s, j), cn = B.digit(s, jn);
            const int a  = cj * B.d + cn;
            const long long base = s - cj * B.pw[static_cast<std::size_t>(j)] - cn * B.pw[static_cast<std::size_t>(jn)];
            for(const auto &[b, v] : cols[static_cast<std::size_t>(a)]) {
                const long long t = base + (b / B.d) * B.pw[static_cast<std::size_t>(j)] + (b % B.d) * B.pw[static_cast<std::size_t>(jn)];
                f(t, v);
            }
        }
    }

    struct Sector {
        std::vector<long long>                  reps;
        std::unordered_map<long long, Eigen::Index> index;
    };

    Sector make_sector(const Basis &B, int m) {
        Sector sec;
        for(long long s = 0; s < B.dim; ++s) {
            if(B.rep[static_cast<std::size_t>(s)] != s) continue;
            const int R = B.period[static_cast<std::size_t>(s)];
            if((static_cast<long long>(m) * R) % B.L != 0) continue;
            sec.index.emplace(s, static_cast<Eigen::Index>(sec.reps.size()));
            sec.reps.push_back(s);
        }
        return sec;
    }

    // |r, k> = R^{-1/2} sum_{j<R} e^{-ikj} T^j |r>, so T |r, k> = e^{ik} |r, k>.
    Eigen::SparseMatrix<cplx> sector_hamiltonian(const Basis &B, const Sector &sec, const std::vector<std::vector<std::pair<int, cplx>>> &cols, int m) {
        const double                    k = 2.0 * pi * m / B.L;
        std::vector<Eigen::Triplet<cplx>> trip;
        for(std::size_t c = 0; c < sec.reps.size(); ++c) {
            const long long r  = sec.reps[c];
            const double    Rr = B.period[static_cast<std::size_t>(r)];
            for_each_hop(B, cols, r, [&](long long t, cplx v) {
                const long long rt = B.rep[static_cast<std::size_t>(t)];
                auto            it = sec.index.find(rt);
                if(it == sec.index.end()) return;
                const double Rt = B.period[static_cast<std::size_t>(rt)];
                trip.emplace_back(it->second, static_cast<Eigen::Index>(c),
                                  v * std::polar(std::sqrt(Rr / Rt), k * B.shift[static_cast<std::size_t>(t)]));
            });
        }
        const auto                n = static_cast<Eigen::Index>(sec.reps.size());
        Eigen::SparseMatrix<cplx> H(n, n);
        H.setFromTriplets(trip.begin(), trip.end());
        return H;
    }

    Vec expand_sector_vector(const Basis &B, const Sector &sec, int m, const Vec &c) {
        const double k = 2.0 * pi * m / B.L;
        Vec          psi = Vec::Zero(B.dim);
        for(long long s = 0; s < B.dim; ++s) {
            auto it = sec.index.find(B.rep[static_cast<std::size_t>(s)]);
            if(it == sec.index.end()) continue;
            const double R = B.period[static_cast<std::size_t>(it->first)];
            psi(s)         = c(it->second) * std::polar(1.0 / std::sqrt(R), -k * B.shift[static_cast<std::size_t>(s)]);
        }
        return psi;
    }

} // namespace

EdResult ed_ground_state(const TwoSiteHamiltonian &h, int L, const EdOptions &opt) {
    if(h.h.rows() != h.d * h.d || h.h.cols() != h.d * h.d) throw DimensionError("ed: bond term is not d^2 x d^2");
    if(opt.n_low < 1) throw InvalidArgument("ed: n_low must be >= 1");
    const Basis B    = make_basis(h.d, L);
    const auto  cols = bond_columns(h);

    EdResult res;
    res.L = L;
    res.d = h.d;
    res.sector_levels.assign(static_cast<std::size_t>(L), {});
    res.E0 = std::numeric_limits<double>::infinity();
    Vec    best_coeffs;
    Sector best_sector;

    for(int m = 0; m < L; ++m) {
        if(opt.k_sector && ((*opt.k_sector % L) + L) % L != m) continue;
        Sector sec = make_sector(B, m);
        if(sec.reps.empty()) continue;
        const auto H = sector_hamiltonian(B, sec, cols, m);
        const auto n = H.rows();
        std::vector<double> levels;
        Vec                 ground;
        if(n <= opt.dense_limit) {
            const Mat                                Hd = Mat(H);
            Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Hd + Hd.adjoint()));
            const int keep = std::min<int>(opt.n_low, static_cast<int>(n));
            for(int i = 0; i < keep; ++i) levels.push_back(es.eigenvalues()(i));
            ground = es.eigenvectors().col(0);
        } else {
            // largest magnitude of (c - H) is the bottom of the spectrum of H
            const double          c = L * h.norm() + 1.0;
            krylov::EigOptions    eo;
            eo.nev = std::min<int>(opt.n_low, static_cast<int>(n));
            eo.tol = 1e-12;
            auto op = [&H, c](const Vec &x, Vec &y) { y = c * x - H * x; };
            const auto r = krylov::eigs(op, n, eo);
            for(Eigen::Index i = 0; i < r.values.size(); ++i) levels.push_back(c - r.values(i).real());
            std::vector<Eigen::Index> ord(levels.size());
            for(std::size_t i = 0; i < ord.size(); ++i) ord[i] = static_cast<Eigen::Index>(i);
            std::sort(ord.begin(), ord.end(), [&](auto a, auto b) { return levels[static_cast<std::size_t>(a)] < levels[static_cast<std::size_t>(b)]; });
            ground = r.vectors.col(ord[0]);
            std::sort(levels.begin(), levels.end());
        }
        for(double e : levels) res.lowest.push_back({e, m});
        if(levels.front() < res.E0) {
            res.E0       = levels.front();
            res.ground_m = m;
            best_coeffs  = ground;
            best_sector  = std::move(sec);
        }
        res.sector_levels[static_cast<std::size_t>(m)] = std::move(levels);
    }
    if(res.lowest.empty()) throw InvalidArgument("ed: requested momentum sector is empty");
    std::sort(res.lowest.begin(), res.lowest.end(), [](const EdLevel &a, const EdLevel &b) { return a.E < b.E; });
    res.gap = res.lowest.size() > 1 ? std::max(0.0, res.lowest[1].E - res.E0) : 0.0;
    if(opt.want_vector) {
        res.ground = expand_sector_vector(B, best_sector, res.ground_m, best_coeffs);
        res.ground /= res.ground.norm();
    }
    return res;
}

Vec ed_apply_h(const TwoSiteHamiltonian &h, int L, const Vec &psi) {
    const Basis B = make_basis(h.d, L);
    if(psi.size() != B.dim) throw DimensionError("ed_apply_h: vector length is not d^L");
    const auto cols = bond_columns(h);
    Vec        out  = Vec::Zero(B.dim);
    for(long long s = 0; s < B.dim; ++s) {
        const cplx a = psi(s);
        if(a == cplx(0)) continue;
        for_each_hop(B, cols, s, [&](long long t, cplx v) { out(t) += v * a; });
    }
    return out;
}

Vec ed_apply_site(const Mat &O, int d, int L, int site, const Vec &psi) {
    if(O.rows() != d || O.cols() != d) throw DimensionError("ed_apply_site: operator is not d x d");
    long long pw = 1, dim = 1;
    for(int j = 0; j < L; ++j) {
        if(j < site) pw *= d;
        dim *= d;
    }
    if(psi.size() != dim) throw DimensionError("ed_apply_site: vector length is not d^L");
    if(site < 0 || site >= L) throw InvalidArgument("ed_apply_site: site out of range");
    Vec out = Vec::Zero(dim);
    for(long long s = 0; s < dim; ++s) {
        const cplx a = psi(s);
        if(a == cplx(0)) continue;
        const int       c    = static_cast<int>((s / pw) % d);
        const long long base = s - c * pw;
        for(int b = 0; b < d; ++b)
            if(O(b, c) != cplx(0)) out(base + b * pw) += O(b, c) * a;
    }
    return out;
}

double ed_sector_excitation(const EdResult &gs, int m) {
    const int   mm     = ((m % gs.L) + gs.L) % gs.L;
    const auto &levels = gs.sector_levels.at(static_cast<std::size_t>(mm));
    const std::size_t i = mm == gs.ground_m ? 1 : 0;
    if(levels.size() <= i) throw InvalidArgument("ed_sector_excitation: sector was not diagonalized");
    return levels[i] - gs.E0;
}

std::vector<EdSmaPoint> ed_sma(const TwoSiteHamiltonian &h, const EdResult &gs, const Mat &O) {
    if(gs.ground.size() == 0) throw InvalidArgument("ed_sma: ground vector missing");
    if((O - O.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidArgument("ed_sma: operator must be Hermitian");
    const int L = gs.L, d = gs.d;
    const Vec &psi = gs.ground;
    const cplx mean = psi.dot(ed_apply_site(O, d, L, 0, psi));
    const Mat  Oz   = O - mean * Mat::Identity(d, d);
    std::vector<Vec> on;
    for(int n = 0; n < L; ++n) on.push_back(ed_apply_site(Oz, d, L, n, psi));

    auto rayleigh = [&](const Vec &v) { return v.dot(ed_apply_h(h, L, v)).real() - gs.E0 * v.squaredNorm(); };
    std::vector<EdSmaPoint> out;
    for(int m = 0; m < L; ++m) {
        const double k  = 2.0 * pi * m / L;
        Vec          vp = Vec::Zero(psi.size()), vm = Vec::Zero(psi.size());
        for(int n = 0; n < L; ++n) {
            vp += std::polar(1.0, k * n) * on[static_cast<std::size_t>(n)];
            vm += std::polar(1.0, -k * n) * on[static_cast<std::size_t>(n)];
        }
        EdSmaPoint p;
        p.m     = m;
        p.k     = k;
        p.S     = vp.squaredNorm() / L;
        p.F     = (rayleigh(vp) + rayleigh(vm)) / L;
        p.E_sma = p.S > 0 ? p.F / (2.0 * p.S) : std::numeric_limits<double>::infinity();
        out.push_back(p);
    }
    return out;
}

} // namespace mpstm
