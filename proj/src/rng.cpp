#include "minclade/rng.hpp"

#include <omp.h>

#include "minclade/replicates.hpp"

namespace minclade {
namespace {

auto make_engine(std::uint64_t master_seed, std::uint64_t stream_id) -> std::mt19937_64 {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id), engine_(make_engine(master_seed, stream_id)) {}

auto entropy_seed() -> std::uint64_t {
  std::random_device rd;
  std::uint64_t seed = 0;
  while (seed == 0) seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return seed;
}

void set_worker_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

auto worker_count() -> int { return omp_get_max_threads(); }

}  // namespace minclade
