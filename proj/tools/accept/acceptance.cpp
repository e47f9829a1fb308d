#include "acceptance.hpp"

#include "mpstm/branches.hpp"
#include "mpstm/canonical.hpp"
#include "mpstm/correlation.hpp"
#include "mpstm/cylinder.hpp"
#include "mpstm/exact_diag.hpp"
#include "mpstm/expectation.hpp"
#include "mpstm/krylov.hpp"
#include "mpstm/momentum_filter.hpp"
#include "mpstm/mps_io.hpp"
#include "mpstm/oz_fit.hpp"
#include "mpstm/spectrum.hpp"
#include "mpstm/spin.hpp"
#include "mpstm/structure_factor.hpp"
#include "mpstm/velocity.hpp"
#include "mpstm/xy_exact.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <sstream>

namespace mpstm::accept {

namespace {

    // pinned tolerances
    constexpr double kA1PhaseTol    = 5e-3;  // units of pi
    constexpr double kA1Kmin        = 0.42949;
    constexpr double kA2Target      = 0.9409;
    constexpr double kA2RelTol      = 0.02;
    constexpr double kA2Lorentz     = 0.9306;
    constexpr double kA2LorentzTol  = 5e-5; // rounding of the quoted four digits
    constexpr double kA2SplitMax    = 0.03; // |v1 - v_lorentz| / v_lorentz, quoted as about 1%
    constexpr double kA3KappaLo     = 1.8;
    constexpr double kA3KappaHi     = 2.2;
    constexpr double kA3RhoTol      = 0.2;
    constexpr double kA4Tol         = 1e-10;
    constexpr double kA5Tol         = 1e-6;
    constexpr double kA5EpsMin      = 0.05;
    constexpr double kA7Tol         = 1e-8;
    constexpr double kA9RatioTol    = 0.25;
    constexpr double kA10Target     = 0.755; // units of pi
    constexpr double kA10Tol        = 0.02;
    constexpr double kA10Reference  = 0.12522; // units of pi, reported alongside A10

    constexpr int kRandomStates = 50;
    constexpr int kGridSize     = 512;

    std::string fmt(double v, int prec = 6) {
        std::ostringstream os;
        os << std::setprecision(prec) << v;
        return os.str();
    }

    CriterionResult make(std::string id, std::string title, double target, double tol) {
        CriterionResult r;
        r.id        = std::move(id);
        r.title     = std::move(title);
        r.target    = target;
        r.tolerance = tol;
        return r;
    }

    Vec up_state() {
        Vec v = Vec::Zero(2);
        v(0)  = 1.0;
        return v;
    }

    // Z2 partner of a spin-1/2 state under the pi rotation about z
    UniformMps z_partner(const UniformMps &mps) { return apply_symmetry(mps, 2.0 * spin::spin_ops(1).sz); }

    Mat random_hermitian(int d, std::uint64_t seed) {
        const Vec x = krylov::random_vector(static_cast<Eigen::Index>(d) * d, seed);
        const Mat m = as_matrix(x, d, d);
        return 0.5 * (m + m.adjoint());
    }

    struct RandomCase {
        UniformMps mps;
        Mat        A, B;
    };

    std::vector<RandomCase> random_cases(std::uint64_t seed) {
        std::vector<RandomCase> out;
        for(int i = 0; out.size() < static_cast<std::size_t>(kRandomStates); ++i) {
            const Eigen::Index D = 2 + i % 5;
            const int          d = 2 + (i / 5) % 2;
            const auto         s = seed + 1000ULL * static_cast<std::uint64_t>(i);
            UniformMps         mps = canonicalize(random_mps(D, d, s));
            if(!mps.injective) continue;
            out.push_back({std::move(mps), random_hermitian(d, s + 1), random_hermitian(d, s + 2)});
        }
        return out;
    }

    const XyParams kFerro{0.3, 0.2};
    const XyParams kPara{0.5, 1.05};

    TwoSiteHamiltonian xy(const XyParams &p) { return build_hamiltonian(Model::XY, {p.gamma, p.g}); }

    // product start along +x selects one of the two symmetry-broken ground states
    const UniformMps &ferro_state(StateCache &cache, Eigen::Index D) {
        ItebdOptions o;
        o.initial = Vec::Constant(2, 1.0);
        return cache.ground_state(xy(kFerro), D, o, "x");
    }

    const UniformMps &para_state(StateCache &cache) {
        ItebdOptions o;
        o.initial = up_state();
        return cache.ground_state(xy(kPara), 32, o, "up");
    }

    double mixed_eps1(const UniformMps &mps, double *phi = nullptr) {
        SpectrumOptions so;
        so.m       = 4;
        so.vectors = false;
        const auto ms = tm_spectrum(mps, z_partner(mps), so);
        if(phi) *phi = ms.phi(0);
        return ms.eps(0);
    }

    CriterionResult a1(StateCache &cache, const AcceptanceOptions &) {
        CriterionResult r = make("A1", "XY mixed-TM minimum momentum", kA1Kmin, kA1PhaseTol);
        const auto     &mps = ferro_state(cache, 32);
        double          phi = 0;
        const double    eps = mixed_eps1(mps, &phi);
        const double    kmin = xy_gap_location(kFerro).k_min;
        r.measured           = std::abs(phi) / pi;
        r.pass               = phase_distance(std::abs(phi), kmin) <= kA1PhaseTol * pi && std::abs(kmin / pi - kA1Kmin) < 5e-5;
        r.detail             = "k_min/pi=" + fmt(kmin / pi, 8) + " eps1=" + fmt(eps);
        return r;
    }

    CriterionResult a2(StateCache &cache, const AcceptanceOptions &) {
        CriterionResult           r = make("A2", "characteristic velocity", kA2Target, kA2RelTol);
        const GapLocation         gl = xy_gap_location(kFerro);
        std::vector<double>       Ds{16, 24, 32, 40}, eps;
        std::ostringstream        per;
        for(double D : Ds) {
            eps.push_back(mixed_eps1(ferro_state(cache, static_cast<Eigen::Index>(D))));
            per << " eps1(" << D << ")=" << fmt(eps.back());
        }
        const LinearFit fit   = extrapolate_inverse_D(Ds, eps);
        const double    v1    = estimate_velocity(fit.intercept, gl.E_min);
        const double    vlor  = lorentz_velocity(kFerro);
        const double    split = std::abs(v1 - vlor) / vlor;
        r.measured            = v1;
        const bool ok_v1      = std::abs(v1 - kA2Target) <= kA2RelTol * kA2Target;
        const bool ok_lor     = std::abs(vlor - kA2Lorentz) <= kA2LorentzTol;
        const bool ok_split   = split <= kA2SplitMax;
        r.pass                = ok_v1 && ok_lor && ok_split;
        r.detail = "E_min=" + fmt(gl.E_min, 8) + " eps1(inf)=" + fmt(fit.intercept) + " v_lorentz=" + fmt(vlor, 8) + " split=" + fmt(split, 4) +
                   (ok_split ? "" : " [split > " + fmt(kA2SplitMax) + "]") + (ok_lor ? "" : " [lorentz mismatch]") + per.str();
        return r;
    }

    CriterionResult a3(StateCache &cache, const AcceptanceOptions &) {
        CriterionResult    r = make("A3", "Ornstein-Zernike exponents", 2.0, 0.2);
        const auto        &mps = para_state(cache);
        SpectrumOptions    so;
        so.m          = 30;
        const auto   spec = tm_spectrum(mps, mps, so);
        const SiteOperator sx(1, spin::spin_ops(1).sx);
        const auto         ff = form_factors(mps, spec, sx, sx);
        const auto         br = cluster_branches(spec);
        // branch carrying the slowest S^x mode
        const Branch *best = nullptr;
        for(const auto &b : br) {
            for(auto j : b.members)
                for(std::size_t i = 0; i < ff.size(); ++i)
                    if(ff.j[i] == j && std::abs(ff.f(static_cast<Eigen::Index>(i))) > kFormFactorZero) {
                        if(!best || b.delta < best->delta) best = &b;
                    }
        }
        if(!best) {
            r.detail = "no branch with non-vanishing S^x form factors";
            return r;
        }
        const OzFit oz = oz_fit(spec, ff, *best);
        r.measured     = oz.kappa;
        r.pass         = oz.kappa >= kA3KappaLo && oz.kappa <= kA3KappaHi && std::abs(oz.rho) <= kA3RhoTol;
        std::ostringstream os;
        os << "rho=" << fmt(oz.rho) << " eta=" << fmt(oz.eta) << " xi=" << fmt(oz.xi) << " members eps:";
        for(double e : oz.eps) os << ' ' << fmt(e, 5);
        r.detail = os.str();
        return r;
    }

    CriterionResult a4(StateCache &, const AcceptanceOptions &opt) {
        CriterionResult r = make("A4", "spectral resummation oracle", 0, kA4Tol);
        for(const auto &c : random_cases(opt.seed)) {
            const SiteOperator A(1, c.A), B(1, c.B);
            SpectrumOptions    so;
            so.dense           = true;
            so.m               = static_cast<int>(c.mps.D() * c.mps.D());
            const auto spec    = tm_spectrum(c.mps, c.mps, so);
            const Vec  direct  = connected_correlation(c.mps, A, B, 50);
            const Vec  resum   = correlation_from_spectrum(spec, form_factors(c.mps, spec, A, B), 50);
            r.measured         = std::max(r.measured, (direct - resum).cwiseAbs().maxCoeff());
        }
        r.pass   = r.measured <= kA4Tol;
        r.detail = std::to_string(kRandomStates) + " states, D<=6, n<=50";
        return r;
    }

    CriterionResult a5(StateCache &, const AcceptanceOptions &opt) {
        CriterionResult   r = make("A5", "structure-factor resolvent oracle", 0, kA5Tol);
        const auto        grid = default_kgrid(kGridSize);
        int               used = 0;
        for(const auto &c : random_cases(opt.seed)) {
            SpectrumOptions so;
            so.m            = 2;
            so.vectors      = false;
            const double e1 = tm_spectrum(c.mps, c.mps, so).eps(1);
            if(e1 < kA5EpsMin) continue;
            const SiteOperator O(1, c.A);
            const auto         sf    = structure_factor(c.mps, O, grid);
            const int          n_cut = static_cast<int>(std::ceil(40.0 / e1));
            const auto         trunc = structure_factor_truncated(c.mps, O, grid, n_cut);
            for(std::size_t i = 0; i < grid.size(); ++i) r.measured = std::max(r.measured, std::abs(sf.S[i] - trunc[i]));
            ++used;
        }
        r.pass   = used > 0 && r.measured <= kA5Tol;
        r.detail = std::to_string(used) + " states with eps1>=" + fmt(kA5EpsMin) + ", " + std::to_string(kGridSize) + "-point grid";
        return r;
    }

    CriterionResult a6(StateCache &cache, const AcceptanceOptions &) {
        const double    step = 2.0 * pi / kGridSize;
        CriterionResult r = make("A6", "S(k) peak / branch correspondence", 0, step / pi);
        const auto     &mps  = ferro_state(cache, 16);
        const auto      grid = default_kgrid(kGridSize);
        const auto      sf   = structure_factor(mps, SiteOperator(1, spin::spin_ops(1).sz), grid);
        const auto      imax = static_cast<std::size_t>(std::max_element(sf.S.begin(), sf.S.end()) - sf.S.begin());
        const double    kpk  = grid[imax];
        SpectrumOptions so;
        so.m            = 20;
        so.vectors      = false;
        const auto spec = tm_spectrum(mps, mps, so);
        const auto br   = cluster_branches(spec);
        double     best = pi;
        int        rank = -1;
        for(std::size_t a = 0; a < br.size(); ++a) {
            const double dist = phase_distance(kpk, br[a].phi);
            if(dist < best) {
                best = dist;
                rank = static_cast<int>(a);
            }
        }
        r.measured = best / pi;
        r.target   = rank >= 0 ? br[static_cast<std::size_t>(rank)].phi / pi : 0;
        r.pass     = best <= step;
        r.detail   = "k_peak/pi=" + fmt(kpk / pi) + " nearest branch #" + std::to_string(rank) + " of " + std::to_string(br.size()) +
                   (rank >= 0 ? " delta=" + fmt(br[static_cast<std::size_t>(rank)].delta) : "");
        return r;
    }

    CriterionResult a7(StateCache &, const AcceptanceOptions &) {
        CriterionResult r = make("A7", "SMA upper bound", 0, kA7Tol);
        const auto      h  = xy(kPara);
        const auto      gs = ed_ground_state(h, 12);
        const auto      sp = spin::spin_ops(1);
        double          worst = std::numeric_limits<double>::infinity();
        int             points = 0;
        for(const Mat &O : {sp.sx, sp.sz}) {
            for(const auto &p : ed_sma(h, gs, O)) {
                const double ex = std::min(ed_sector_excitation(gs, p.m), ed_sector_excitation(gs, (gs.L - p.m) % gs.L));
                worst           = std::min(worst, p.E_sma - ex);
                ++points;
            }
        }
        r.measured = worst;
        r.pass     = worst >= -kA7Tol;
        r.detail   = "min(E_sma - E_ed) over " + std::to_string(points) + " points (S^x, S^z), L=12";
        return r;
    }

    CriterionResult a8(StateCache &cache, const AcceptanceOptions &) {
        CriterionResult    r = make("A8", "momentum-filtered bound", 0, 0);
        const auto        &mps  = para_state(cache);
        const auto         h    = xy(kPara);
        const double       v_lr = 2.0 * h.norm();
        const SiteOperator sx   = zero_meaned(mps, SiteOperator(1, spin::spin_ops(1).sx));
        const auto         disp = [](double k) { return xy_dispersion(kPara, k); };
        std::ostringstream os;
        bool               ok    = true;
        double             worst = -std::numeric_limits<double>::infinity();
        for(double k : {0.0, 0.5 * pi, pi}) {
            const auto fc  = filtered_correlation_scaled(mps, sx, sx, k, 100, 0.25);
            // fit the tail of the range resolved above the round-off floor
            int resolved = 0;
            for(int l = 1; l <= 100; ++l)
                if(std::abs(fc.C(l - 1)) > 1e-12) resolved = l;
            const auto fit = decay_rate_fit(fc, std::max(5, std::min(30, resolved / 2)), resolved);
            const auto gb  = bound_rate(disp, k, default_delta_grid(), v_lr);
            const double xi = fit.points >= 5 && fit.rate > 0 ? fit.xi() : std::numeric_limits<double>::infinity();
            ok              = ok && xi <= gb.xi_bound;
            worst           = std::max(worst, xi / gb.xi_bound);
            os << " k/pi=" << fmt(k / pi, 3) << ": xi=" << fmt(xi) << " bound=" << fmt(gb.xi_bound) << " delta*=" << fmt(gb.delta, 4) << " fit<=" << resolved;
        }
        r.measured = worst;
        r.target   = 1.0;
        r.pass     = ok;
        r.detail   = "max xi/xi_bound;" + os.str();
        return r;
    }

    CriterionResult a9(StateCache &, const AcceptanceOptions &) {
        CriterionResult    r = make("A9", "AKLT square cylinder", 1.0, kA9RatioTol);
        const auto         t  = aklt_tensor(Lattice::square);
        bool               ok = true;
        double             worst = 1.0;
        std::ostringstream os;
        for(int ny : {4, 6}) {
            const auto cut = dispersion_cut({ring_tm_spectrum(t, ny)});
            const auto &mn = cut.minima.front();
            double      onset = std::numeric_limits<double>::infinity();
            for(const auto &e : cut.entries)
                if(e.eps > 1e-12 && e.kx == 0.0 && phase_distance(e.ky, 0.0) < 1e-9) onset = std::min(onset, e.eps);
            const double ratio = onset / cut.continuum.front();
            const bool   loc   = std::abs(mn.kx - pi) < 1e-12 && phase_distance(mn.ky, pi) < 1e-9 && mn.degeneracy == 3 && mn.spin == 1;
            const bool   cont  = std::abs(ratio - 1.0) <= kA9RatioTol;
            ok                 = ok && loc && cont;
            if(std::abs(ratio - 1.0) > std::abs(worst - 1.0)) worst = ratio;
            os << " Ny=" << ny << ": min (" << fmt(mn.kx / pi, 3) << "pi," << fmt(mn.ky / pi, 3) << "pi) eps=" << fmt(mn.eps) << " deg=" << mn.degeneracy
               << " S=" << mn.spin << " onset/(2 eps_min)=" << fmt(ratio, 4) << (loc ? "" : " [location]") << (cont ? "" : " [continuum]");
        }
        r.measured = worst;
        r.pass     = ok;
        r.detail   = "worst continuum ratio;" + os.str();
        return r;
    }

    CriterionResult a10(StateCache &cache, const AcceptanceOptions &) {
        CriterionResult r = make("A10", "BLBQ crossover branch phase", kA10Target, kA10Tol);
        const auto      h   = build_hamiltonian(Model::BLBQ, {0.15652 * pi});
        const auto     &mps = cache.ground_state(h, 64, {}, "random");
        SpectrumOptions so;
        so.m            = 20;
        so.vectors      = false;
        const auto spec = tm_spectrum(mps, mps, so);
        const auto br   = cluster_branches(spec);
        if(br.empty()) {
            r.detail = "no branches";
            return r;
        }
        r.measured = std::abs(br.front().phi) / pi;
        r.pass     = std::abs(r.measured - kA10Target) <= kA10Tol;
        r.detail   = "delta=" + fmt(br.front().delta) + " members=" + std::to_string(br.front().count()) +
                   " leading |phi|/pi=" + fmt(std::abs(spec.phi(1)) / pi);

        // diagnostic only: the same branch on the commensurate side of the crossover
        const auto  h2   = build_hamiltonian(Model::BLBQ, {kA10Reference * pi});
        const auto &mps2 = cache.ground_state(h2, 32, {}, "random");
        const auto  br2  = cluster_branches(tm_spectrum(mps2, mps2, so));
        if(!br2.empty()) r.detail += "; theta=" + fmt(kA10Reference) + "pi D=32: |phi|/pi=" + fmt(std::abs(br2.front().phi) / pi);
        return r;
    }

    std::string cache_key(const TwoSiteHamiltonian &h, Eigen::Index D, const std::string &tag) {
        std::ostringstream os;
        os << h.name() << "_D" << D << '_' << tag;
        std::string s = os.str();
        for(char &c : s)
            if(!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_') c = '_';
        return s;
    }

} // namespace

const UniformMps &StateCache::ground_state(const TwoSiteHamiltonian &h, Eigen::Index D, const ItebdOptions &opt, const std::string &tag) {
    const std::string key = cache_key(h, D, tag);
    if(auto it = mem_.find(key); it != mem_.end()) return it->second;
    const std::string path = dir_.empty() ? std::string() : (std::filesystem::path(dir_) / (key + ".umps")).string();
    if(!path.empty() && std::filesystem::exists(path) && std::filesystem::exists(path + ".json")) return mem_[key] = io::load_umps(path);
    auto res = itebd_ground_state(h, D, opt);
    if(!path.empty()) {
        std::filesystem::create_directories(dir_);
        io::MpsMetadata meta;
        meta.model  = std::string(model_name(h.model));
        meta.params = h.params;
        meta.D      = res.mps.D();
        meta.gauge  = gauge_name(res.mps.gauge);
        meta.energy = res.energy;
        meta.schmidt.assign(res.mps.schmidt.data(), res.mps.schmidt.data() + res.mps.schmidt.size());
        io::save_umps(path, res.mps, meta);
    }
    return mem_[key] = std::move(res.mps);
}

const std::vector<std::pair<std::string, Criterion>> &criteria() {
    static const std::vector<std::pair<std::string, Criterion>> list{{"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
                                                                     {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}};
    return list;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &opt) {
    StateCache                   cache(opt.cache_dir);
    std::vector<CriterionResult> out;
    for(const auto &[id, fn] : criteria()) {
        if(!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
        const auto      t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = fn(cache, opt);
        } catch(const std::exception &e) {
            r.id     = id;
            r.pass   = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if(opt.on_result) opt.on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult &r) {
    std::ostringstream os;
    os << std::left << std::setw(4) << r.id << ' ' << (r.pass ? "PASS" : "FAIL") << "  " << r.title << "  measured=" << fmt(r.measured, 8)
       << " target=" << fmt(r.target, 8) << " tol=" << fmt(r.tolerance, 4) << "  (" << r.detail << ") [" << fmt(r.seconds, 3) << " s]";
    return os.str();
}

std::string json_report(const std::vector<CriterionResult> &results) {
    nlohmann::json j = nlohmann::json::array();
    for(const auto &r : results)
        j.push_back({{"id", r.id},
                     {"title", r.title},
                     {"measured", r.measured},
                     {"target", r.target},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass},
                     {"detail", r.detail},
                     {"seconds", r.seconds}});
    return j.dump(2) + "\n";
}

} // namespace mpstm::accept
