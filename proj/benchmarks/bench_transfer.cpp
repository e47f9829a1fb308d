#include "mpstm/aklt.hpp"
#include "mpstm/canonical.hpp"
#include "mpstm/cylinder.hpp"
#include "mpstm/krylov.hpp"
#include "mpstm/spectrum.hpp"
#include "mpstm/structure_factor.hpp"
#include "mpstm/spin.hpp"
#include "mpstm/transfer.hpp"

#include <benchmark/benchmark.h>

using namespace mpstm;

static void BM_ApplyTm(benchmark::State &state) {
    const auto D   = static_cast<Eigen::Index>(state.range(0));
    const auto mps = canonicalize(random_mps(D, 2, 1));
    const Vec  x   = krylov::random_vector(D * D, 2);
    Vec        y(D * D);
    for(auto _ : state) {
        apply_tm_into(mps, mps, Direction::right, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ApplyTm)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNCubed);

static void BM_TmSpectrum(benchmark::State &state) {
    const auto      D   = static_cast<Eigen::Index>(state.range(0));
    const auto      mps = canonicalize(random_mps(D, 2, 3));
    SpectrumOptions so;
    so.m       = 8;
    so.vectors = false;
    for(auto _ : state) benchmark::DoNotOptimize(tm_spectrum(mps, mps, so).eigenvalues.data());
}
BENCHMARK(BM_TmSpectrum)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_StructureFactor(benchmark::State &state) {
    const auto mps  = canonicalize(random_mps(static_cast<Eigen::Index>(state.range(0)), 2, 4));
    const auto grid = default_kgrid(32);
    const auto O    = SiteOperator(1, spin::spin_ops(1).sx);
    for(auto _ : state) benchmark::DoNotOptimize(structure_factor(mps, O, grid).S.data());
}
BENCHMARK(BM_StructureFactor)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_CylinderApply(benchmark::State &state) {
    const CylinderTm tm(aklt_tensor(Lattice::square), static_cast<int>(state.range(0)));
    const Vec        x = krylov::random_vector(tm.size(), 5);
    Vec              y(tm.size());
    for(auto _ : state) {
        tm.apply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * tm.size());
}
BENCHMARK(BM_CylinderApply)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
