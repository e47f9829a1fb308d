#include "commands.hpp"

#include "csv.hpp"

#include "acceptance.hpp"

#include "mpstm/branches.hpp"
#include "mpstm/canonical.hpp"
#include "mpstm/correlation.hpp"
#include "mpstm/cylinder.hpp"
#include "mpstm/exact_diag.hpp"
#include "mpstm/expectation.hpp"
#include "mpstm/momentum_filter.hpp"
#include "mpstm/mps_io.hpp"
#include "mpstm/oz_fit.hpp"
#include "mpstm/spectrum.hpp"
#include "mpstm/spin.hpp"
#include "mpstm/structure_factor.hpp"
#include "mpstm/xy_exact.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <future>
#include <iostream>
#include <optional>

namespace mpstm::cli {

std::string Context::path(const std::string &file) const { return (std::filesystem::path(out_dir) / file).string(); }

namespace {

    struct LoadedState {
        UniformMps                        mps;
        std::optional<TwoSiteHamiltonian> h;
        std::string                       label;
    };

    std::optional<TwoSiteHamiltonian> hamiltonian_from(const std::string &model, const std::vector<double> &params) {
        try {
            return build_hamiltonian(parse_model(model), params);
        } catch(const Error &) {
            return std::nullopt;
        }
    }

    // `state` wins over model + D; the first D of a list is used
    LoadedState obtain_state(const Context &ctx) {
        LoadedState s;
        if(ctx.cfg.has("state")) {
            io::MpsMetadata meta;
            const auto      path = ctx.cfg.get<std::string>("state");
            s.mps                = io::load_umps(path, &meta);
            if(s.mps.gauge != Gauge::mixed) s.mps = canonicalize(s.mps);
            s.h     = ctx.cfg.has("model.name") ? std::optional(ctx.cfg.hamiltonian()) : hamiltonian_from(meta.model, meta.params);
            s.label = path;
            return s;
        }
        const auto h = ctx.cfg.hamiltonian();
        const int  D = ctx.cfg.int_list("D").front();
        spdlog::info("iTEBD {} D={}", h.name(), D);
        s.mps   = itebd_ground_state(h, D, ctx.cfg.itebd_options(ctx.seed)).mps;
        s.h     = h;
        s.label = h.name() + " D=" + std::to_string(D);
        return s;
    }

    void write_report(const Context &ctx, const std::string &file, nlohmann::json body) {
        body["config_hash"] = ctx.hash;
        body["seed"]        = ctx.seed;
        io::write_file_atomic(ctx.path(file), body.dump(2) + "\n");
    }

    Mat rotation(const Mat &generator) {
        Eigen::SelfAdjointEigenSolver<Mat> es(generator);
        Vec                                ph(es.eigenvalues().size());
        for(Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, pi * es.eigenvalues()(i));
        return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    }

    UniformMps symmetry_partner(const Context &ctx, const UniformMps &mps) {
        const auto name = ctx.cfg.get_or<std::string>("spectrum.symmetry", "rot_z");
        const auto s    = spin::spin_ops(mps.d() - 1);
        if(name == "rot_x") return apply_symmetry(mps, rotation(s.sx));
        if(name == "rot_y") return apply_symmetry(mps, rotation(s.sy));
        if(name == "rot_z") return apply_symmetry(mps, rotation(s.sz));
        throw ConfigError(ctx.cfg.origin() + ": spectrum.symmetry must be rot_x, rot_y or rot_z");
    }

    SiteOperator site_operator(const Context &ctx, const std::string &key, const UniformMps &mps) {
        return zero_meaned(mps, SiteOperator(1, ctx.cfg.operator_matrix(key, mps.d())));
    }

} // namespace

int run_gs(const Context &ctx) {
    const auto h = ctx.cfg.hamiltonian();
    CsvTable   table({"D", "energy", "exact_energy", "eps1", "xi", "lambda1", "sweeps"}, ctx.hash);
    for(int D : ctx.cfg.int_list("D")) {
        spdlog::info("iTEBD {} D={}", h.name(), D);
        const auto res = itebd_ground_state(h, D, ctx.cfg.itebd_options(ctx.seed));
        io::MpsMetadata meta;
        meta.model  = std::string(model_name(h.model));
        meta.params = h.params;
        meta.D      = res.mps.D();
        meta.gauge  = gauge_name(res.mps.gauge);
        meta.energy = res.energy;
        meta.schmidt.assign(res.mps.schmidt.data(), res.mps.schmidt.data() + res.mps.schmidt.size());
        io::save_umps(ctx.path("gs_D" + std::to_string(D) + ".umps"), res.mps, meta);

        SpectrumOptions so;
        so.m       = 2;
        so.vectors = false;
        const auto   spec  = tm_spectrum(res.mps, res.mps, so);
        const double exact = h.model == Model::XY ? xy_ground_energy({h.params[0], h.params[1]}) : std::nan("");
        long long    sweeps = 0;
        for(const auto &st : res.stages) sweeps += st.sweeps;
        table.add_row({static_cast<long long>(D), res.energy, exact, spec.eps(1), 1.0 / spec.eps(1), res.mps.lambda1, sweeps});
    }
    table.write(ctx.path("gs.csv"));
    return 0;
}

int run_spectrum(const Context &ctx) {
    const auto      st   = obtain_state(ctx);
    const auto      kind = ctx.cfg.get_or<std::string>("spectrum.kind", "regular");
    SpectrumOptions so;
    so.m       = ctx.cfg.get_or<int>("spectrum.m", 12);
    so.vectors = false;
    TmSpectrum spec;
    if(kind == "regular") spec = tm_spectrum(st.mps, st.mps, so);
    else if(kind == "mixed") spec = tm_spectrum(st.mps, symmetry_partner(ctx, st.mps), so);
    else throw ConfigError(ctx.cfg.origin() + ": spectrum.kind must be regular or mixed");

    CsvTable table({"j", "re", "im", "abs", "eps", "phi"}, ctx.hash);
    for(Eigen::Index j = 0; j < spec.size(); ++j)
        table.add_row({static_cast<long long>(j), spec.eigenvalues(j).real(), spec.eigenvalues(j).imag(), std::abs(spec.eigenvalues(j)), spec.eps(j),
                       spec.phi(j)});
    table.write(ctx.path("spectrum.csv"));

    CsvTable br({"branch", "phi", "delta", "members"}, ctx.hash);
    const auto branches = cluster_branches(spec);
    for(std::size_t a = 0; a < branches.size(); ++a)
        br.add_row({static_cast<long long>(a), branches[a].phi, branches[a].delta, static_cast<long long>(branches[a].count())});
    br.write(ctx.path("branches.csv"));
    write_report(ctx, "spectrum.json", {{"state", st.label}, {"kind", kind}, {"m", so.m}, {"conjugation_defect", conjugation_defect(spec)}});
    return 0;
}

int run_corr(const Context &ctx) {
    const auto st    = obtain_state(ctx);
    const auto A     = site_operator(ctx, "A", st.mps);
    const auto B     = site_operator(ctx, "B", st.mps);
    const int  n_max = ctx.cfg.get<int>("corr.n_max");
    const Vec  C     = connected_correlation(st.mps, A, B, n_max);
    CsvTable   table({"n", "re", "im"}, ctx.hash);
    for(int n = 1; n <= n_max; ++n) table.add_row({static_cast<long long>(n), C(n - 1).real(), C(n - 1).imag()});
    table.write(ctx.path("corr.csv"));
    return 0;
}

int run_sfactor(const Context &ctx) {
    const auto st   = obtain_state(ctx);
    const Mat  Om   = ctx.cfg.operator_matrix("O", st.mps.d());
    const auto grid = default_kgrid(ctx.cfg.get_or<int>("kgrid.n", 512));
    const auto sf   = structure_factor(st.mps, SiteOperator(1, Om), grid);
    std::vector<double> F, E;
    if(st.h) {
        F = oscillator_strength(st.mps, *st.h, Om, grid);
        try {
            E = sma_dispersion(F, sf.S);
        } catch(const Error &e) {
            spdlog::warn("SMA dispersion skipped: {}", e.what());
        }
    }
    CsvTable table({"k", "S", "local", "resolvent", "F", "E_sma"}, ctx.hash);
    for(std::size_t i = 0; i < grid.size(); ++i)
        table.add_row({grid[i], sf.S[i], sf.local[i], sf.resolvent[i], F.empty() ? std::nan("") : F[i], E.empty() ? std::nan("") : E[i]});
    table.write(ctx.path("sfactor.csv"));
    write_report(ctx, "sfactor.json", {{"state", st.label}, {"max_imag", sf.max_imag}, {"max_residual", sf.max_residual}});
    return 0;
}

int run_ozfit(const Context &ctx) {
    const auto      st = obtain_state(ctx);
    SpectrumOptions so;
    so.m            = ctx.cfg.get_or<int>("ozfit.m", 30);
    const auto spec = tm_spectrum(st.mps, st.mps, so);
    const SiteOperator A(1, ctx.cfg.operator_matrix("A", st.mps.d()));
    const SiteOperator B(1, ctx.cfg.operator_matrix("B", st.mps.d()));
    const auto         ff       = form_factors(st.mps, spec, A, B);
    const auto         branches = cluster_branches(spec);
    if(branches.empty()) throw InvalidArgument("ozfit: spectrum has no branches");
    const int idx = ctx.cfg.get_or<int>("ozfit.branch", 0);
    if(idx < 0 || idx >= static_cast<int>(branches.size())) throw ConfigError(ctx.cfg.origin() + ": ozfit.branch out of range");
    const OzFit oz = oz_fit(spec, ff, branches[static_cast<std::size_t>(idx)]);

    CsvTable table({"j", "eps", "abs_f"}, ctx.hash);
    for(std::size_t j = 0; j < oz.eps.size(); ++j) table.add_row({static_cast<long long>(j), oz.eps[j], oz.fabs[j]});
    table.write(ctx.path("ozfit.csv"));
    write_report(ctx, "ozfit.json",
                 {{"state", st.label},
                  {"phi", oz.phi},
                  {"delta", oz.delta},
                  {"kappa", oz.kappa},
                  {"g", oz.g},
                  {"rho", oz.rho},
                  {"eta", oz.eta},
                  {"xi", oz.xi},
                  {"eps_rms", oz.eps_rms},
                  {"ff_rms", oz.ff_rms}});
    return 0;
}

int run_filter(const Context &ctx) {
    const auto st      = obtain_state(ctx);
    const auto A       = site_operator(ctx, "A", st.mps);
    const auto B       = site_operator(ctx, "B", st.mps);
    const auto ks      = ctx.cfg.get<std::vector<double>>("filter.k");
    const int  ell_max = ctx.cfg.get<int>("filter.ell_max");
    const auto ratio   = ctx.cfg.get_or<double>("filter.ratio", 0.25);
    const auto window  = ctx.cfg.get_or<std::vector<int>>("filter.fit", {std::min(30, ell_max / 2), ell_max});
    if(window.size() != 2) throw ConfigError(ctx.cfg.origin() + ": filter.fit is [l_min, l_max]");

    std::optional<XyParams> xy;
    if(st.h && st.h->model == Model::XY) xy = XyParams{st.h->params[0], st.h->params[1]};

    CsvTable series({"k", "ell", "re", "im"}, ctx.hash);
    CsvTable bound({"k", "delta_star", "E_star", "xi_bound", "xi_fitted"}, ctx.hash);
    for(double k : ks) {
        const auto fc  = filtered_correlation_scaled(st.mps, A, B, k, ell_max, ratio);
        for(std::size_t i = 0; i < fc.ell.size(); ++i)
            series.add_row({k, static_cast<long long>(fc.ell[i]), fc.C(static_cast<Eigen::Index>(i)).real(), fc.C(static_cast<Eigen::Index>(i)).imag()});
        const auto fit = decay_rate_fit(fc, window[0], window[1]);
        if(xy) {
            const auto gb = bound_rate([&](double q) { return xy_dispersion(*xy, q); }, k, default_delta_grid(), 2.0 * st.h->norm());
            bound.add_row({k, gb.delta, gb.E_star, gb.xi_bound, fit.xi()});
        }
    }
    series.write(ctx.path("filter.csv"));
    if(xy) bound.write(ctx.path("filter_bound.csv"));
    else spdlog::info("filter: gap bound needs the exact XY dispersion; filter_bound.csv not written");
    return 0;
}

int run_peps(const Context &ctx) {
    const auto lattice = parse_lattice(ctx.cfg.get<std::string>("peps.lattice"));
    const auto nys     = ctx.cfg.int_list("peps.ny");
    const auto twists  = ctx.cfg.get_or<std::vector<double>>("peps.twist", {0.0});
    RingSpectrumOptions opt;
    opt.m               = ctx.cfg.get_or<int>("peps.m", opt.m);
    const auto t        = aklt_tensor(lattice);

    struct Job {
        int    ny;
        double twist;
    };
    std::vector<Job> jobs;
    for(int ny : nys)
        for(double tw : twists) jobs.push_back({ny, tw});
    std::vector<RingSpectrum> spectra(jobs.size());
    // independent (ny, twist) jobs, at most `threads` at a time; output order is fixed by the job list
    const std::size_t width = static_cast<std::size_t>(std::max(1, ctx.threads));
    for(std::size_t start = 0; start < jobs.size(); start += width) {
        std::vector<std::future<RingSpectrum>> running;
        for(std::size_t i = start; i < std::min(jobs.size(), start + width); ++i)
            running.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                                         [&, i] { return ring_tm_spectrum(t, jobs[i].ny, jobs[i].twist, opt); }));
        for(std::size_t i = 0; i < running.size(); ++i) spectra[start + i] = running[i].get();
    }
    const auto cut = dispersion_cut(spectra);
    CsvTable   table({"kx", "ky", "eps", "degeneracy", "spin", "Ny", "twist"}, ctx.hash);
    for(const auto &e : cut.entries)
        table.add_row({e.kx, e.ky, e.eps, static_cast<long long>(e.degeneracy), static_cast<long long>(e.spin), static_cast<long long>(e.ny), e.twist});
    table.write(ctx.path("dispersion.csv"));

    nlohmann::json minima = nlohmann::json::array();
    for(std::size_t i = 0; i < cut.minima.size(); ++i) {
        const auto &m = cut.minima[i];
        minima.push_back({{"Ny", m.ny},
                          {"twist", m.twist},
                          {"kx", m.kx},
                          {"ky", m.ky},
                          {"eps", m.eps},
                          {"degeneracy", m.degeneracy},
                          {"spin", m.spin},
                          {"continuum", cut.continuum[i]}});
    }
    nlohmann::json checks = nlohmann::json::array();
    for(const auto &s : spectra)
        checks.push_back({{"Ny", s.ny}, {"twist", s.twist}, {"max_imag", s.max_imag}, {"translation_residual", s.translation_residual}});
    write_report(ctx, "peps.json", {{"lattice", std::string(lattice_name(lattice))}, {"minima", minima}, {"checks", checks}});
    return 0;
}

int run_oracle(const Context &ctx) {
    const auto kind = ctx.cfg.get<std::string>("oracle.kind");
    const auto h    = ctx.cfg.hamiltonian();
    if(kind == "xy") {
        if(h.model != Model::XY) throw ConfigError(ctx.cfg.origin() + ": oracle.kind xy needs model.name XY");
        const XyParams p{h.params[0], h.params[1]};
        const auto     grid = default_kgrid(ctx.cfg.get_or<int>("kgrid.n", 512));
        CsvTable       table({"k", "E"}, ctx.hash);
        for(double k : grid) table.add_row({k, xy_dispersion(p, k)});
        table.write(ctx.path("xy_dispersion.csv"));
        const auto     gl = xy_gap_location(p);
        nlohmann::json body{{"k_min", gl.k_min}, {"E_min", gl.E_min}, {"E0_per_site", xy_ground_energy(p)}};
        body["lorentz_velocity"] = p.incommensurate() ? nlohmann::json(lorentz_velocity(p)) : nlohmann::json(nullptr);
        write_report(ctx, "oracle.json", body);
        return 0;
    }
    if(kind == "ed") {
        const int  L  = ctx.cfg.get<int>("oracle.L");
        const auto gs = ed_ground_state(h, L);
        CsvTable   levels({"m", "k", "level", "E"}, ctx.hash);
        for(int m = 0; m < L; ++m) {
            const auto &lv = gs.sector_levels[static_cast<std::size_t>(m)];
            for(std::size_t i = 0; i < lv.size(); ++i) levels.add_row({static_cast<long long>(m), gs.momentum(m), static_cast<long long>(i), lv[i]});
        }
        levels.write(ctx.path("ed_levels.csv"));
        CsvTable   sma({"m", "k", "S", "F", "E_sma", "E_ed"}, ctx.hash);
        const auto O = ctx.cfg.has("operators.O") ? ctx.cfg.operator_matrix("O", h.d) : spin::spin_ops(h.d - 1).sx;
        for(const auto &p : ed_sma(h, gs, O))
            sma.add_row({static_cast<long long>(p.m), p.k, p.S, p.F, p.E_sma,
                         std::min(ed_sector_excitation(gs, p.m), ed_sector_excitation(gs, (L - p.m) % L))});
        sma.write(ctx.path("ed_sma.csv"));
        write_report(ctx, "oracle.json", {{"L", L}, {"E0", gs.E0}, {"gap", gs.gap}, {"ground_m", gs.ground_m}});
        return 0;
    }
    throw ConfigError(ctx.cfg.origin() + ": oracle.kind must be xy or ed");
}

int run_accept(const Context &ctx) {
    accept::AcceptanceOptions opt;
    opt.only      = ctx.cfg.get_or<std::vector<std::string>>("accept.only", {});
    opt.cache_dir = ctx.cfg.get_or<std::string>("accept.cache", "");
    opt.on_result = [](const accept::CriterionResult &r) { std::cout << accept::format_result(r) << std::endl; };
    const auto results = accept::run_acceptance(opt);
    io::write_file_atomic(ctx.path("acceptance.json"), accept::json_report(results));
    const auto failed = std::count_if(results.begin(), results.end(), [](const auto &r) { return !r.pass; });
    std::cout << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}

} // namespace mpstm::cli
