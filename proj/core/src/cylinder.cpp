#include "mpstm/cylinder.hpp"

#include "mpstm/krylov.hpp"

#include <algorithm>
#include <sstream>

namespace mpstm {

namespace {

    // q of a doubled leg index p = ket * 2 + bra, with m = +1/2 for 0 and -1/2 for 1
    constexpr int kLegCharge[4] = {0, 1, -1, 0};

    Eigen::Index ipow4(int n) { return Eigen::Index(1) << (2 * n); }

} // namespace

CylinderTm::CylinderTm(const PepsTensor &t, int ny, double twist) : ny_(ny), twist_(twist) {
    if(t.D != 2) throw DimensionError("CylinderTm: virtual dimension 2 required");
    if(ny < 2) throw InvalidArgument("CylinderTm: ring length must be >= 2");
    if(ny > 12) throw DimensionError("CylinderTm: 4^ny exceeds 2^24");
    dim_ = ipow4(ny);
    M_   = Mat::Zero(16, 16);
    for(int u = 0; u < 4; ++u)
        for(int dn = 0; dn < 4; ++dn)
            for(int l = 0; l < 4; ++l)
                for(int r = 0; r < 4; ++r) {
                    cplx e = 0;
                    for(int s = 0; s < t.d; ++s)
                        e += t.at(s, u / 2, dn / 2, l / 2, r / 2) * std::conj(t.at(s, u % 2, dn % 2, l % 2, r % 2));
                    M_(dn * 4 + r, u * 4 + l) = e * std::polar(1.0, twist * kLegCharge[dn] / ny);
                }
    for(int c = 0; c < 16; ++c)
        for(int r = 0; r < 16; ++r)
            if(std::abs(M_(r, c)) > 1e-15 * M_.cwiseAbs().maxCoeff()) nz_.push_back({r, c, M_(r, c)});
}

void CylinderTm::apply(const Vec &x, Vec &y) const {
    if(x.size() != dim_) throw DimensionError("CylinderTm::apply: wrong vector length");
    y.setZero(dim_);
    Mat X(dim_, 4), Xn(dim_, 4);
    for(int a = 0; a < 4; ++a) {
        // X(., b) is the partial contraction with open vertical legs (a at the top of site 0, b below the last site done)
        X.setZero();
        X.col(a) = x;
        for(int site = 0; site < ny_; ++site) {
            const Eigen::Index s = ipow4(site), outer = dim_ / (4 * s);
            Xn.setZero();
            for(const auto &[row, col, v] : nz_) {
                const int          bp = row / 4, r = row % 4, b = col / 4, l = col % 4;
                // strided view over (hi, lo) with the leg digit fixed
                using Strided = Eigen::Map<Mat, 0, Eigen::OuterStride<>>;
                Eigen::Map<const Mat, 0, Eigen::OuterStride<>> src(X.col(b).data() + l * s, s, outer, Eigen::OuterStride<>(4 * s));
                Strided                                        dst(Xn.col(bp).data() + r * s, s, outer, Eigen::OuterStride<>(4 * s));
                dst += v * src;
            }
            std::swap(X, Xn);
        }
        y += X.col(a);
    }
}

Eigen::Index CylinderTm::translate_index(Eigen::Index idx) const {
    const Eigen::Index top = ipow4(ny_ - 1);
    const Eigen::Index hi  = idx / top;
    return (idx - hi * top) * 4 + hi;
}

void CylinderTm::translate(const Vec &x, Vec &y) const {
    if(x.size() != dim_) throw DimensionError("CylinderTm::translate: wrong vector length");
    y.resize(dim_);
    for(Eigen::Index i = 0; i < dim_; ++i) y(translate_index(i)) = x(i);
}

void CylinderTm::project_momentum(Vec &x, int m) const {
    const double k   = 2.0 * pi * m / ny_;
    Vec          acc = x, cur = x, nxt;
    for(int j = 1; j < ny_; ++j) {
        translate(cur, nxt);
        std::swap(cur, nxt);
        acc += std::polar(1.0, -k * j) * cur;
    }
    x = acc / static_cast<double>(ny_);
}

int CylinderTm::charge(Eigen::Index idx) const {
    int q = 0;
    for(int y = 0; y < ny_; ++y, idx /= 4) q += kLegCharge[idx % 4];
    return q;
}

double CylinderTm::translation_residual(std::uint64_t seed) const {
    const Vec x = krylov::random_vector(dim_, seed);
    Vec       tx, etx, ex, tex;
    translate(x, tx);
    apply(tx, etx);
    apply(x, ex);
    translate(ex, tex);
    return (etx - tex).norm() / ex.norm();
}

namespace {

    struct Orbit {
        Eigen::Index rep;
        int          period;
        int          charge;
    };

    std::vector<Orbit> orbits(const CylinderTm &tm) {
        std::vector<Orbit> out;
        std::vector<char>  seen(static_cast<std::size_t>(tm.size()), 0);
        for(Eigen::Index i = 0; i < tm.size(); ++i) {
            if(seen[static_cast<std::size_t>(i)]) continue;
            int R = 0;
            for(Eigen::Index c = i; !seen[static_cast<std::size_t>(c)]; c = tm.translate_index(c), ++R) seen[static_cast<std::size_t>(c)] = 1;
            out.push_back({i, R, tm.charge(i)});
        }
        return out;
    }

    struct RawLevel {
        cplx lambda;
        int  charge;
    };

    std::vector<cplx> sector_eigenvalues(const CylinderTm &tm, const std::vector<Orbit> &orb, const std::vector<int> &charges, int m, int q,
                                         const RingSpectrumOptions &opt) {
        const int    N = tm.ny();
        const double k = 2.0 * pi * m / N;
        std::vector<const Orbit *> basis;
        for(const auto &o : orb)
            if(o.charge == q && (static_cast<long long>(m) * o.period) % N == 0) basis.push_back(&o);
        const auto dimS = static_cast<Eigen::Index>(basis.size());
        std::vector<cplx> vals;
        if(dimS == 0) return vals;

        if(dimS <= std::max<Eigen::Index>(opt.dense_limit, opt.m + 2)) {
            // |r, k> = R^{-1/2} sum_{j<R} e^{-ikj} T^j |r>
            Mat B = Mat::Zero(tm.size(), dimS);
            for(Eigen::Index c = 0; c < dimS; ++c) {
                Eigen::Index idx = basis[static_cast<std::size_t>(c)]->rep;
                const int    R   = basis[static_cast<std::size_t>(c)]->period;
                for(int j = 0; j < R; ++j, idx = tm.translate_index(idx)) B(idx, c) = std::polar(1.0 / std::sqrt(double(R)), -k * j);
            }
            Mat TB(tm.size(), dimS);
            Vec y;
            for(Eigen::Index c = 0; c < dimS; ++c) {
                tm.apply(B.col(c), y);
                TB.col(c) = y;
            }
            const Mat                       Ms = B.adjoint() * TB;
            Eigen::ComplexEigenSolver<Mat> es(Ms, false);
            for(Eigen::Index i = 0; i < dimS; ++i) vals.push_back(es.eigenvalues()(i));
        } else {
            auto project = [&](Vec &v) {
                for(Eigen::Index i = 0; i < v.size(); ++i)
                    if(charges[static_cast<std::size_t>(i)] != q) v(i) = 0;
                tm.project_momentum(v, m);
            };
            auto op = [&](const Vec &x, Vec &y) {
                tm.apply(x, y);
                project(y);
            };
            krylov::EigOptions eo;
            eo.nev  = opt.m + 2;
            eo.tol  = opt.tol;
            eo.seed = opt.seed + static_cast<std::uint64_t>(m * 131 + (q + 64));
            eo.v0   = krylov::random_vector(tm.size(), eo.seed);
            project(eo.v0);
            const auto r = krylov::eigs(op, tm.size(), eo);
            for(Eigen::Index i = 0; i < r.values.size(); ++i) vals.push_back(r.values(i));
        }
        std::sort(vals.begin(), vals.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
        if(static_cast<int>(vals.size()) > opt.m) vals.resize(static_cast<std::size_t>(opt.m));
        return vals;
    }

} // namespace

RingSpectrum ring_tm_spectrum(const PepsTensor &t, int ny, double twist, const RingSpectrumOptions &opt) {
    if(opt.m < 1) throw InvalidArgument("ring_tm_spectrum: m must be >= 1");
    const CylinderTm tm(t, ny, twist);
    RingSpectrum     out;
    out.ny                   = ny;
    out.twist                = twist;
    out.translation_residual = tm.translation_residual();

    const auto       orb = orbits(tm);
    std::vector<int> charges(static_cast<std::size_t>(tm.size()));
    for(Eigen::Index i = 0; i < tm.size(); ++i) charges[static_cast<std::size_t>(i)] = tm.charge(i);
    const int qmax = std::min(opt.max_charge, ny);

    std::vector<std::vector<RawLevel>> raw(static_cast<std::size_t>(ny));
    std::vector<double>                cut(static_cast<std::size_t>(ny), 0.0);
    for(int m = 0; m < ny; ++m)
        for(int q = -qmax; q <= qmax; ++q) {
            const auto vals = sector_eigenvalues(tm, orb, charges, m, q, opt);
            if(q == 0 && static_cast<int>(vals.size()) == opt.m) cut[static_cast<std::size_t>(m)] = std::abs(vals.back());
            for(cplx v : vals) raw[static_cast<std::size_t>(m)].push_back({v, q});
        }

    cplx lam0 = 0;
    for(const auto &r : raw[0])
        if(r.charge == 0 && std::abs(r.lambda) > std::abs(lam0)) lam0 = r.lambda;
    if(lam0 == cplx(0)) throw ConvergenceError("ring_tm_spectrum: no dominant eigenvalue found", 0.0);
    out.lambda0 = std::abs(lam0);

    for(int m = 0; m < ny; ++m) {
        auto &list = raw[static_cast<std::size_t>(m)];
        // levels at or below the charge-0 cutoff may be incomplete in some charge sector
        const double c = cut[static_cast<std::size_t>(m)] * (1.0 + 1e-6);
        std::erase_if(list, [&](const RawLevel &r) { return std::abs(r.lambda) <= c || std::abs(r.lambda) < 1e-13 * out.lambda0; });
        std::sort(list.begin(), list.end(), [](const RawLevel &a, const RawLevel &b) { return std::abs(a.lambda) > std::abs(b.lambda); });

        RingSector sec;
        sec.m  = m;
        sec.ky = wrap_phase(2.0 * pi * m / ny);
        std::vector<char> used(list.size(), 0);
        for(std::size_t i = 0; i < list.size(); ++i) {
            if(used[i]) continue;
            RingLevel lv;
            lv.lambda = list[i].lambda / out.lambda0;
            for(std::size_t j = i; j < list.size(); ++j) {
                if(used[j] || std::abs(list[j].lambda - list[i].lambda) > opt.degeneracy_tol * out.lambda0) continue;
                used[j] = 1;
                lv.charges.push_back(list[j].charge);
            }
            std::sort(lv.charges.begin(), lv.charges.end());
            lv.degeneracy = static_cast<int>(lv.charges.size());
            lv.eps        = -std::log(std::abs(lv.lambda));
            lv.kx         = lv.lambda.real() < 0 ? pi : 0.0;
            // single multiplet iff the charges are exactly -S .. S
            const int S = (lv.degeneracy - 1) / 2;
            bool      ok = lv.degeneracy % 2 == 1 && S < qmax;
            for(int a = 0; ok && a < lv.degeneracy; ++a) ok = lv.charges[static_cast<std::size_t>(a)] == a - S;
            lv.spin      = ok ? S : -1;
            out.max_imag = std::max(out.max_imag, std::abs(lv.lambda.imag()));
            sec.levels.push_back(std::move(lv));
        }
        out.sectors.push_back(std::move(sec));
    }
    return out;
}

DispersionCut dispersion_cut(const std::vector<RingSpectrum> &spectra) {
    if(spectra.empty()) throw InvalidArgument("dispersion_cut: no spectra");
    DispersionCut cut;
    for(const auto &sp : spectra) {
        if(static_cast<int>(sp.sectors.size()) != sp.ny) {
            std::ostringstream os;
            os << "dispersion_cut: spectrum for ny=" << sp.ny << " has " << sp.sectors.size() << " momentum sectors";
            throw InvalidArgument(os.str());
        }
        DispersionEntry best;
        best.eps = std::numeric_limits<double>::infinity();
        for(const auto &sec : sp.sectors)
            for(std::size_t i = 0; i < sec.levels.size(); ++i) {
                const auto     &lv = sec.levels[i];
                DispersionEntry e;
                e.kx         = lv.kx;
                e.ky         = sec.ky;
                e.eps        = std::max(0.0, lv.eps);
                e.degeneracy = lv.degeneracy;
                e.spin       = lv.spin;
                e.ny         = sp.ny;
                e.twist      = sp.twist;
                if(sp.twist != 0.0 && lv.degeneracy == 1) e.ky = wrap_phase(sec.ky + sp.twist * lv.charges.front() / sp.ny);
                const bool ground = sec.m == 0 && i == 0;
                if(ground) e.eps = 0.0;
                cut.entries.push_back(e);
                if(!ground && e.eps < best.eps) best = e;
            }
        if(std::isfinite(best.eps)) {
            cut.minima.push_back(best);
            cut.continuum.push_back(2.0 * best.eps);
        }
    }
    return cut;
}

} // namespace mpstm
