#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "minclade/rng.hpp"

namespace minclade {

// Generates `count` replicates, replicate r drawing from
// RngStream(master_seed, first_stream + r). Output slot r always holds
// replicate r.
//
// The serial version is the reference; the OpenMP version must produce the
// identical vector for every thread count.
template <typename Fn>
auto run_replicates_serial(std::size_t count, std::uint64_t master_seed, Fn&& fn,
                           std::uint64_t first_stream = 0) {
  using Result = decltype(fn(std::declval<RngStream&>()));
  std::vector<Result> out(count);
  for (std::size_t r = 0; r < count; ++r) {
    RngStream rng(master_seed, first_stream + r);
    out[r] = fn(rng);
  }
  return out;
}

template <typename Fn>
auto run_replicates(std::size_t count, std::uint64_t master_seed, Fn&& fn,
                    std::uint64_t first_stream = 0) {
  using Result = decltype(fn(std::declval<RngStream&>()));
  std::vector<Result> out(count);
  const auto signed_count = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t r = 0; r < signed_count; ++r) {
    RngStream rng(master_seed, first_stream + static_cast<std::uint64_t>(r));
    out[static_cast<std::size_t>(r)] = fn(rng);
  }
  return out;
}

// Sets the OpenMP worker count; 0 leaves the runtime default.
void set_worker_count(int threads);
auto worker_count() -> int;

}  // namespace minclade
