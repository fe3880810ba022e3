#pragma once

// Goodness-of-fit machinery used to check simulations against exact laws,
// plus convergence diagnostics for the large-n limits.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "minclade/coalescent_sim.hpp"
#include "minclade/limits.hpp"
#include "minclade/pmf.hpp"

namespace minclade {

inline constexpr double kDefaultSignificance = 1e-3;

struct GofReport {
  std::string test_name;
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool pass = true;
  std::int64_t n_samples = 0;
  std::string pooling_map;  // e.g. "[2] [3] [4..9]"
  std::uint64_t seed = 0;
};

auto to_json(const GofReport& report) -> nlohmann::ordered_json;

// Counts of integer observations on {min_value, ..., min_value + size - 1}.
struct Histogram {
  int min_value = 0;
  std::vector<std::int64_t> counts;

  static auto of(std::span<const int> values) -> Histogram;
  auto total() const -> std::int64_t;
  auto max_value() const -> int { return min_value + static_cast<int>(counts.size()) - 1; }
  auto at(int value) const -> std::int64_t;
};

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
auto chi_square_survival(double statistic, int dof) -> double;
// Upper tail of the asymptotic Kolmogorov distribution, P(K > lambda).
auto kolmogorov_survival(double lambda) -> double;

// Pearson chi-square of observed counts against a pmf. Adjacent support
// values are pooled, working inward from the right tail, until every bin
// expects at least 5 observations.
auto chi_square_gof(const Histogram& observed, const FloatPmf& pmf, double significance = kDefaultSignificance,
                    std::string test_name = "chi_square_gof") -> GofReport;
auto chi_square_gof(const Histogram& observed, const ExactPmf& pmf, double significance = kDefaultSignificance,
                    std::string test_name = "chi_square_gof") -> GofReport;

// Chi-square test of homogeneity of two independent samples, pooling as above
// on the combined expected counts.
auto two_sample_chi_square(const Histogram& first, const Histogram& second,
                           double significance = kDefaultSignificance,
                           std::string test_name = "two_sample_chi_square") -> GofReport;

// Histograms of two categorical samples over a shared dense index of the
// keys seen in either one, ready for two_sample_chi_square.
auto paired_histograms(std::span<const std::int64_t> first, std::span<const std::int64_t> second)
    -> std::pair<Histogram, Histogram>;

// One-sample Kolmogorov-Smirnov test against U[0, 1].
auto ks_uniform(std::span<const double> values, double significance = kDefaultSignificance,
                std::string test_name = "ks_uniform") -> GofReport;

// A position in the block-of-1 process: either i counted from the start or
// kappa - i counted from the end.
struct SPosition {
  int offset = 1;
  bool from_end = false;

  static auto start(int i) -> SPosition { return {i, false}; }
  static auto end(int i) -> SPosition { return {i, true}; }
  auto resolve(int kappa) const -> int { return from_end ? kappa - offset : offset; }
  auto name() const -> std::string;
};

// Compares the law of |S_i| - 1 with the law of n - |S_{kappa-i}| for each
// position. Records whose kappa does not admit 1 <= i <= kappa - 1 are
// dropped. Even-indexed records feed the first sample and odd-indexed ones
// the second, so the two samples are independent.
auto reversal_marginal_test(std::span<const CladeRecord> records, std::span<const SPosition> positions,
                            double significance = kDefaultSignificance) -> std::vector<GofReport>;

struct ConvergenceRow {
  std::string kind;  // "moment", "ks", "table_fraction"
  int n = 0;
  int k = 0;            // moment order; 0 for other rows
  double x = 0.0;       // grid point for table_fraction rows
  double value = 0.0;
  double target = 0.0;
  double abs_error = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool pass = true;  // abs_error strictly decreasing along each series in increasing n
};

auto to_json(const ConvergenceTable& table) -> nlohmann::ordered_json;
void write_csv(std::ostream& os, const ConvergenceTable& table);

auto strictly_decreasing(std::span<const double> values) -> bool;

// scaled_moment(n, k) against 1/k for every (k, n), floating recursion.
auto moment_trend(std::span<const int> k_values, std::span<const int> n_values,
                  const Limits& limits = default_limits()) -> ConvergenceTable;

// KS distance of log X_n / log n from U[0, 1], `samples` draws of the fast
// sampler per n, replicate r using RngStream(seed, r).
auto ks_trend(std::span<const int> n_values, int samples, std::uint64_t seed) -> ConvergenceTable;

// Monte Carlo mean of sum_{j <= floor(n^x)} A_j / K over a CRP(n), compared
// with x. Grid points must lie in (0, 1]. Replicate r uses
// RngStream(seed, r).
auto cumulative_table_fraction(int n, std::span<const double> x_grid, int replicates, std::uint64_t seed)
    -> ConvergenceTable;

// Combines per-n tables and sets pass when the maximum deviation over the
// grid shrinks strictly with n.
auto table_fraction_trend(std::span<const int> n_values, std::span<const double> x_grid, int replicates,
                          std::uint64_t seed) -> ConvergenceTable;

}  // namespace minclade
