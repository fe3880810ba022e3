#pragma once

// Standard (theta = 1) Chinese restaurant process.

#include <optional>
#include <vector>

#include "minclade/rng.hpp"

namespace minclade {

// Tables indexed by creation order. Sizes are always kept; label sets only
// when sampled in full mode.
struct CrpTables {
  int n = 0;
  std::vector<int> sizes;
  std::optional<std::vector<std::vector<int>>> labels;

  auto table_count() const -> int { return static_cast<int>(sizes.size()); }
  auto is_valid() const -> bool;
};

enum class CrpMode { Full, CountsOnly };

// Customer i opens a new table with probability 1/i, otherwise sits next to
// a uniformly chosen seated customer (a size-biased table choice).
// Full mode seats customers one by one. CountsOnly draws the same table
// sizes, in creation order, from O(log n) expected uniforms.
auto sample_crp(int n, RngStream& rng, CrpMode mode = CrpMode::Full) -> CrpTables;

// Size of a table chosen uniformly among the occupied tables (not size-biased).
auto uniform_table_size(const CrpTables& tables, RngStream& rng) -> int;

// Sum of independent Bernoulli(1/i), i = 1..n; distributed as K_n.
auto sample_k_bernoulli(int n, RngStream& rng) -> int;

// X_n = RT_{n-1} + 1 via a counts-only CRP(n-1).
auto sample_minimal_clade_fast(int n, RngStream& rng) -> int;

// A[i] = number of tables of size i, i = 1..n (index 0 unused).
auto table_count_vector(const CrpTables& tables) -> std::vector<int>;

}  // namespace minclade
