#include "acceptance.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char **argv) {
    CLI::App                  app{"Acceptance criteria A1-A10"};
    mpstm::accept::AcceptanceOptions opt;
    std::string               report;
    app.add_option("--cache", opt.cache_dir, "directory for cached ground states");
    app.add_option("--only", opt.only, "criterion ids to run");
    app.add_option("--report", report, "write the JSON report here");
    CLI11_PARSE(app, argc, argv);

    opt.on_result = [](const mpstm::accept::CriterionResult &r) { std::cout << mpstm::accept::format_result(r) << std::endl; };
    const auto results = mpstm::accept::run_acceptance(opt);

    int failed = 0;
    for(const auto &r : results) failed += r.pass ? 0 : 1;
    std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed\n";
    if(!report.empty()) std::ofstream(report) << mpstm::accept::json_report(results);
    return failed == 0 ? 0 : 1;
}
