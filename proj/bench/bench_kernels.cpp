// Serial reference kernels against their OpenMP counterparts.
//   bench_kernels --benchmark_filter=Replicates

#include <benchmark/benchmark.h>

#include "minclade/coalescent_sim.hpp"
#include "minclade/crp_sim.hpp"
#include "minclade/exact_dist.hpp"
#include "minclade/replicates.hpp"

namespace {

using namespace minclade;

constexpr std::size_t kReplicates = 20000;

void BM_CutReplicatesSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = run_replicates_serial(kReplicates, 42, [n](RngStream& rng) { return sample_clade_record_cut(n, rng).x_n; });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kReplicates));
}

void BM_CutReplicatesParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = run_replicates(kReplicates, 42, [n](RngStream& rng) { return sample_clade_record_cut(n, rng).x_n; });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kReplicates));
}

void BM_FastSamplerSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = run_replicates_serial(kReplicates, 42, [n](RngStream& rng) { return sample_minimal_clade_fast(n, rng); });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kReplicates));
}

void BM_FastSamplerParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = run_replicates(kReplicates, 42, [n](RngStream& rng) { return sample_minimal_clade_fast(n, rng); });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kReplicates));
}

void BM_InvShiftSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto table = expected_inv_shifted<double>(n);
    benchmark::DoNotOptimize(table.first_column.data());
  }
}

void BM_InvShiftParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto column = expected_inv_shifted_parallel(n);
    benchmark::DoNotOptimize(column.data());
  }
}

}  // namespace

BENCHMARK(BM_CutReplicatesSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CutReplicatesParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FastSamplerSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FastSamplerParallel)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InvShiftSerial)->Arg(2000)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InvShiftParallel)->Arg(2000)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
