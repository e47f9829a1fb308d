#pragma once

#include "config.hpp"

#include <cstdint>
#include <string>

namespace mpstm::cli {

struct Context {
    RunConfig     cfg;
    std::string   out_dir = ".";
    std::uint64_t seed    = 1;
    int           threads = 1;
    std::string   hash;

    [[nodiscard]] std::string path(const std::string &file) const;
};

/// Each returns the process exit status.
int run_gs(const Context &ctx);
int run_spectrum(const Context &ctx);
int run_corr(const Context &ctx);
int run_sfactor(const Context &ctx);
int run_ozfit(const Context &ctx);
int run_filter(const Context &ctx);
int run_peps(const Context &ctx);
int run_oracle(const Context &ctx);
int run_accept(const Context &ctx);

} // namespace mpstm::cli
