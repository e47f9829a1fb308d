#include "commands.hpp"

#include "mpstm/common.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

int main(int argc, char **argv) {
    using namespace mpstm::cli;

    CLI::App app{"Transfer-matrix spectroscopy of uniform MPS and PEPS cylinders"};
    app.require_subcommand(1);

    std::string   config_path;
    std::string   out_dir = ".";
    int           threads = 1;
    std::uint64_t seed    = 1;
    bool          quiet   = false;
    app.add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "concurrent jobs (peps)")->check(CLI::PositiveNumber);
    auto *seed_opt = app.add_option("--seed", seed, "seed for random initial states (overrides the config)");
    app.add_flag("-q,--quiet", quiet, "only warnings and errors on stderr");

    const std::map<std::string, std::pair<std::string, std::function<int(const Context &)>>> commands{
        {"gs", {"iTEBD ground states for every D", run_gs}},
        {"spectrum", {"regular or mixed transfer-matrix spectrum and branches", run_spectrum}},
        {"corr", {"connected correlation function", run_corr}},
        {"sfactor", {"static structure factor and single-mode estimate", run_sfactor}},
        {"ozfit", {"Ornstein-Zernike fit along a branch", run_ozfit}},
        {"filter", {"momentum-filtered correlations and gap bound", run_filter}},
        {"peps", {"AKLT cylinder ring spectra and dispersion cut", run_peps}},
        {"oracle", {"exact XY data or exact diagonalization", run_oracle}},
        {"accept", {"acceptance suite with a pass/fail table", run_accept}},
    };
    for(const auto &[name, entry] : commands) app.add_subcommand(name, entry.first);

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(quiet ? spdlog::level::warn : spdlog::level::info);
    spdlog::set_pattern("[%l] %v");

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        Context ctx;
        ctx.cfg     = config_path.empty() ? RunConfig::from_string("", "<empty config>") : RunConfig::from_file(config_path);
        ctx.cfg.validate(name);
        ctx.seed    = seed_opt->count() ? seed : ctx.cfg.get_or<std::uint64_t>("seed", 1);
        ctx.threads = threads;
        ctx.out_dir = out_dir;
        ctx.hash    = ctx.cfg.hash(ctx.seed);
        std::filesystem::create_directories(out_dir);
        spdlog::info("{}: config hash {}", name, ctx.hash.substr(0, 16));
        return commands.at(name).second(ctx);
    } catch(const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch(const mpstm::Error &e) {
        std::cerr << name << ": " << e.what() << '\n';
        return 3;
    } catch(const std::exception &e) {
        std::cerr << name << ": " << e.what() << '\n';
        return 3;
    }
}
