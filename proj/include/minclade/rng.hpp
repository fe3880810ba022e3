#pragma once

#include <cstdint>
#include <random>

namespace minclade {

// Reproducible random stream identified by (master_seed, stream_id).
// Replicate r of a run uses stream_id = r, so results never depend on how
// replicates are distributed over threads.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  auto master_seed() const -> std::uint64_t { return master_seed_; }
  auto stream_id() const -> std::uint64_t { return stream_id_; }

  // Uniform on {0, ..., bound - 1}; bound >= 1.
  auto below(std::uint64_t bound) -> std::uint64_t {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }
  // Uniform on {lo, ..., hi}.
  auto between(std::int64_t lo, std::int64_t hi) -> std::int64_t {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }
  // Uniform on [0, 1).
  auto uniform() -> double { return std::generate_canonical<double, 64>(engine_); }
  auto bernoulli(double p) -> bool { return uniform() < p; }

  auto engine() -> std::mt19937_64& { return engine_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

// Draws a nonzero seed from the system entropy source.
auto entropy_seed() -> std::uint64_t;

}  // namespace minclade
