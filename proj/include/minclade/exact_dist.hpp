#pragma once

// Exact and floating laws of the minimal clade size X_n of the
// Bolthausen-Sznitman n-coalescent, the table count K_n and the uniformly
// chosen table size RT_n of a Chinese restaurant process.
//
// Three independent routes to the law of X_n are provided:
//   - mincl_pmf_partitions:   sum over integer partitions of n-1 with
//                             Ewens weights prod 1/(a_i! i^a_i)
//   - mincl_pmf_compositions: convolution of 1/m over compositions
//   - mincl_pmf_recursion:    P(X_n = j+1) = E(1/(1+K_{n-1-j})) / j, with
//                             E(1/(m+K_l)) from the Bernoulli recursion
// The recursion is the production route; the other two are validators.

#include <vector>

#include <gmpxx.h>

#include "minclade/limits.hpp"
#include "minclade/pmf.hpp"
#include "minclade/rational.hpp"

namespace minclade {

// Unsigned Stirling numbers of the first kind S[m][k], 1 <= k <= m <= n_max.
class StirlingTriangle {
 public:
  explicit StirlingTriangle(int n_max);

  auto n_max() const -> int { return n_max_; }
  // S(m, k); zero outside 1 <= k <= m.
  auto at(int m, int k) const -> const mpz_class&;

 private:
  int n_max_;
  std::vector<std::vector<mpz_class>> rows_;  // rows_[m][k], index 0 unused
  mpz_class zero_{0};
};

auto stirling_first_table(int n_max, const Limits& limits = default_limits()) -> StirlingTriangle;

// P(K_n = k) = S(n, k) / n!, support {1, ..., n}.
auto k_tables_pmf(int n, const Limits& limits = default_limits()) -> ExactPmf;

enum class InvShiftStorage { FirstColumn, Full };

// f(l, m) = E(1/(m + K_l)) with K_0 = 0, built row by row through
//   f(l, m) = (1 - 1/l) f(l-1, m) + (1/l) f(l-1, m+1).
// Row l is needed for m in {1, ..., n_max + 1 - l}. f(l, 1) is always kept;
// the whole triangle only with InvShiftStorage::Full.
template <typename P>
struct InvShiftTable {
  int n_max = 0;
  std::vector<P> first_column;       // first_column[l] = f(l, 1), l = 0..n_max
  std::vector<std::vector<P>> rows;  // rows[l][m-1] = f(l, m); empty unless Full

  auto at(int l, int m) const -> const P&;
};

// Serial reference build (single rolling buffer).
template <typename P>
auto expected_inv_shifted(int n_max, InvShiftStorage storage = InvShiftStorage::FirstColumn)
    -> InvShiftTable<P>;

// OpenMP build of f(l, 1) in floating point: each row update is split across
// threads over m using a double buffer. Bit-identical to the serial build.
auto expected_inv_shifted_parallel(int n_max) -> std::vector<double>;

// Law of X_n on {2, ..., n} from the recursion.
template <typename P>
auto mincl_pmf_recursion(int n, const Limits& limits = default_limits()) -> Pmf<P>;

// Law of X_n from the integer-partition sum.
auto mincl_pmf_partitions(int n, const Limits& limits = default_limits()) -> ExactPmf;

// c_k(m) = sum over compositions (n_1, ..., n_k) of m of 1/(n_1 ... n_k),
// as a triangle coeffs[k][m] for 1 <= k <= m <= m_max (zero elsewhere).
auto composition_sums(int m_max) -> std::vector<std::vector<ExactRational>>;

// Law of X_n from the composition sums.
auto mincl_pmf_compositions(int n, const Limits& limits = default_limits()) -> ExactPmf;

// Law of RT_n, the size of a uniformly chosen table of a CRP(n): the law of
// X_{n+1} shifted down by one.
template <typename P>
auto rt_pmf(int n, const Limits& limits = default_limits()) -> Pmf<P>;

// E(X_n^k) from the recursion pmf.
template <typename P>
auto moment(int n, int k, const Limits& limits = default_limits()) -> P;

// E(X_n^k) of an already computed pmf of X_n.
auto moment_of(const ExactPmf& pmf, int k) -> ExactRational;
auto moment_of(const FloatPmf& pmf, int k) -> double;

// (log n / n^k) E(X_n^k), evaluated in floating point.
auto scaled_moment(int n, int k, const Limits& limits = default_limits()) -> double;
auto scaled_moment_of(const FloatPmf& pmf, int k) -> double;

}  // namespace minclade
