#include "mpstm/structure_factor.hpp"

#include "mpstm/krylov.hpp"
#include "mpstm/spin.hpp"

#include <sstream>

namespace mpstm {

namespace {

    void require_hermitian(const Mat &O, const char *who) {
        if(hermiticity_defect(O) > 1e-12) throw InvalidArgument(std::string(who) + ": operator is not Hermitian");
    }

    // C(n) for 0 <= n < w (overlapping placements), complex.
    Vec local_correlations(const UniformMps &mps, const SiteOperator &O) {
        const int w = O.support;
        Vec       c(w);
        c(0) = expectation(mps, SiteOperator(w, O.matrix * O.matrix));
        if(w > 1) c.tail(w - 1) = connected_correlation(mps, O, O, w - 1);
        return c;
    }

    double local_part(const Vec &c, double k, double &imag) {
        imag       = std::max(imag, std::abs(c(0).imag()));
        double out = c(0).real();
        for(Eigen::Index n = 1; n < c.size(); ++n) out += 2.0 * (std::polar(1.0, k * static_cast<double>(n)) * c(n)).real();
        return out;
    }

} // namespace

std::vector<double> default_kgrid(int n) {
    std::vector<double> k(static_cast<std::size_t>(n));
    for(int i = 0; i < n; ++i) k[static_cast<std::size_t>(i)] = 2.0 * pi * (i + 0.5) / n;
    return k;
}

StructureFactor structure_factor(const UniformMps &mps, const SiteOperator &O0, const std::vector<double> &kgrid, const ResolventOptions &opt) {
    require_hermitian(O0.matrix, "structure_factor");
    const SiteOperator O  = O0.zero_mean ? O0 : zero_meaned(mps, O0);
    const auto         D  = mps.D();
    const int          w  = O.support;
    const FixedPoints  fp = fixed_points(mps);
    const Vec          l  = flatten(fp.l), r = flatten(fp.r);
    const OperatorTm   J(mps, O);
    const Vec          wl = J.apply(Direction::left, l);
    Vec                b  = J.apply(Direction::right, r);
    b -= r * tm_pair(l, b, D, D);
    const Vec          cloc  = local_correlations(mps, O);
    const cplx         lam0  = fp.lambda0;
    const cplx         norm  = std::pow(lam0, 2 * w);

    StructureFactor sf;
    sf.k = kgrid;
    Vec Tx(D * D);
    for(double k : kgrid) {
        const cplx       phase = std::polar(1.0, k);
        krylov::LinearOp A     = [&](const Vec &x, Vec &y) {
            Vec qx = x - r * tm_pair(l, x, D, D);
            apply_tm_into(mps, mps, Direction::right, qx, Tx);
            Tx /= lam0;
            Tx -= r * tm_pair(l, Tx, D, D);
            y = x - phase * Tx;
        };
        krylov::GmresOptions go;
        go.tol      = opt.tol;
        go.restart  = opt.restart;
        go.max_iter = opt.max_iter;
        auto res    = krylov::gmres(A, b, Vec(), go);
        if(!res.converged) {
            krylov::EigOptions eo;
            eo.nev              = std::min<int>(2, static_cast<int>(D * D));
            eo.throw_on_failure = false;
            auto ev             = krylov::eigs(tm_operator(mps, mps, Direction::right), D * D, eo);
            const cplx l1       = ev.values.size() > 1 ? ev.values(1) / ev.values(0) : cplx(0);
            std::ostringstream os;
            os << "structure_factor: resolvent solve stagnated at k=" << k << " (residual " << res.residual << "); e^{ik} lambda_1 = " << phase * l1;
            throw ConvergenceError(os.str(), res.residual);
        }
        sf.max_residual  = std::max(sf.max_residual, res.residual);
        const double tail = 2.0 * (std::polar(1.0, k * w) * tm_pair(wl, res.x, D, D) / norm).real();
        const double loc  = local_part(cloc, k, sf.max_imag);
        sf.local.push_back(loc);
        sf.resolvent.push_back(tail);
        sf.S.push_back(loc + tail);
    }
    return sf;
}

StructureFactor structure_factor_spectral(const UniformMps &mps, const SiteOperator &O0, const TmSpectrum &spec, const std::vector<double> &kgrid) {
    require_hermitian(O0.matrix, "structure_factor_spectral");
    const SiteOperator  O    = O0.zero_mean ? O0 : zero_meaned(mps, O0);
    const FormFactorSet ff   = form_factors(mps, spec, O, O);
    const Vec           cloc = local_correlations(mps, O);
    StructureFactor     sf;
    sf.k = kgrid;
    for(double k : kgrid) {
        cplx tail = 0;
        for(std::size_t i = 0; i < ff.size(); ++i) {
            const cplx lam = spec.eigenvalues(ff.j[i]);
            tail += ff.f(static_cast<Eigen::Index>(i)) / (1.0 - std::polar(1.0, k) * lam);
        }
        tail *= std::polar(1.0, k * O.support);
        const double loc = local_part(cloc, k, sf.max_imag);
        sf.local.push_back(loc);
        sf.resolvent.push_back(2.0 * tail.real());
        sf.S.push_back(loc + 2.0 * tail.real());
    }
    return sf;
}

std::vector<double> structure_factor_truncated(const UniformMps &mps, const SiteOperator &O0, const std::vector<double> &kgrid, int n_cut) {
    require_hermitian(O0.matrix, "structure_factor_truncated");
    const SiteOperator  O  = O0.zero_mean ? O0 : zero_meaned(mps, O0);
    const cplx          c0 = expectation(mps, SiteOperator(O.support, O.matrix * O.matrix));
    const Vec           C  = connected_correlation(mps, O, O, n_cut);
    std::vector<double> S;
    for(double k : kgrid) {
        double s = c0.real();
        for(int n = 1; n <= n_cut; ++n) s += 2.0 * (std::polar(1.0, k * n) * C(n - 1)).real();
        S.push_back(s);
    }
    return S;
}

std::vector<double> oscillator_strength(const UniformMps &mps, const TwoSiteHamiltonian &h, const Mat &O, const std::vector<double> &kgrid) {
    require_hermitian(O, "oscillator_strength");
    if(O.rows() != h.d) throw DimensionError("oscillator_strength: O must be a single-site operator of the model's dimension");
    const Mat I   = Mat::Identity(h.d, h.d);
    const Mat rho = reduced_density_matrix(mps, 2);
    auto      dc  = [&](const Mat &a, const Mat &b) {
        const Mat inner = h.h * b - b * h.h;
        return (rho * (a * inner - inner * a)).trace();
    };
    const Mat OL = spin::kron(O, I), OR = spin::kron(I, O);
    // bond (-1, 0): O_0 is the right site; bond (0, 1): O_0 is the left site
    const cplx t_m1 = dc(OR, OL);             // n = -1
    const cplx t_0  = dc(OR, OR) + dc(OL, OL); // n = 0
    const cplx t_p1 = dc(OL, OR);             // n = +1
    std::vector<double> F;
    for(double k : kgrid) F.push_back((std::polar(1.0, -k) * t_m1 + t_0 + std::polar(1.0, k) * t_p1).real());
    return F;
}

double oscillator_strength_bound(const Mat &O, const TwoSiteHamiltonian &h, int l, int m) {
    Eigen::JacobiSVD<Mat> svd(O);
    const double          on = svd.singularValues()(0);
    return 4.0 * (4 * l + 2 * m + 1) * (2 * l + m + 1) * on * on * h.norm();
}

std::vector<double> sma_dispersion(const std::vector<double> &F, const std::vector<double> &S) {
    if(F.size() != S.size()) throw DimensionError("sma_dispersion: F and S differ in length");
    std::vector<double> E;
    for(std::size_t i = 0; i < F.size(); ++i) {
        if(!(S[i] > 0)) {
            std::ostringstream os;
            os << "sma_dispersion: S(k) vanishes or is negative at grid index " << i;
            throw InvalidArgument(os.str());
        }
        E.push_back(F[i] / (2.0 * S[i]));
    }
    return E;
}

} // namespace mpstm
