#include "minclade/stat_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "minclade/crp_sim.hpp"
#include "minclade/errors.hpp"
#include "minclade/exact_dist.hpp"
#include "minclade/replicates.hpp"

namespace minclade {

auto to_json(const GofReport& report) -> nlohmann::ordered_json {
  nlohmann::ordered_json j;
  j["test_name"] = report.test_name;
  j["statistic"] = report.statistic;
  j["dof"] = report.dof;
  j["p_value"] = report.p_value;
  j["pass"] = report.pass;
  j["n_samples"] = report.n_samples;
  j["seed"] = report.seed;
  return j;
}

auto Histogram::of(std::span<const int> values) -> Histogram {
  Histogram h;
  if (values.empty()) return h;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  h.min_value = *lo;
  h.counts.assign(static_cast<std::size_t>(*hi - *lo) + 1, 0);
  for (int v : values) ++h.counts[v - h.min_value];
  return h;
}

auto Histogram::total() const -> std::int64_t {
  std::int64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

auto Histogram::at(int value) const -> std::int64_t {
  if (counts.empty() || value < min_value || value > max_value()) return 0;
  return counts[value - min_value];
}

auto chi_square_survival(double statistic, int dof) -> double {
  if (std::isnan(statistic)) return 0.0;
  if (statistic <= 0.0) return 1.0;
  if (std::isinf(statistic)) return 0.0;
  if (dof < 1) return statistic > 0.0 ? 0.0 : 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

auto kolmogorov_survival(double lambda) -> double {
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.0) {
    // P(K <= lambda) = sqrt(2 pi) / lambda * sum exp(-(2k-1)^2 pi^2 / (8 lambda^2))
    double cdf = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double term = std::exp(-(2 * k - 1) * (2 * k - 1) * pi * pi / (8.0 * lambda * lambda));
      cdf += term;
      if (term < 1e-18) break;
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double tail = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    tail += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(tail, 0.0, 1.0);
}

namespace {

struct Bin {
  int first;
  int last;
};

// Groups consecutive cells, starting at the right tail, until each group's
// weight reaches `minimum`; a short leftmost remainder joins its neighbour.
auto pool_from_right(const std::vector<double>& weight, double minimum) -> std::vector<Bin> {
  std::vector<Bin> bins;  // built right to left
  double acc = 0.0;
  int open_last = static_cast<int>(weight.size()) - 1;
  for (int i = open_last; i >= 0; --i) {
    acc += weight[i];
    if (acc >= minimum) {
      bins.push_back({i, open_last});
      open_last = i - 1;
      acc = 0.0;
    }
  }
  if (open_last >= 0) {
    if (bins.empty()) {
      bins.push_back({0, open_last});
    } else {
      bins.back().first = 0;
    }
  }
  std::reverse(bins.begin(), bins.end());
  return bins;
}

auto describe_bins(const std::vector<Bin>& bins, int offset) -> std::string {
  std::ostringstream os;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (i) os << ' ';
    os << '[' << bins[i].first + offset;
    if (bins[i].last != bins[i].first) os << ".." << bins[i].last + offset;
    os << ']';
  }
  return os.str();
}

auto finish(GofReport report, double significance) -> GofReport {
  report.p_value = std::clamp(chi_square_survival(report.statistic, report.dof), 0.0, 1.0);
  report.pass = report.p_value >= significance;
  return report;
}

}  // namespace

auto chi_square_gof(const Histogram& observed, const FloatPmf& pmf, double significance, std::string test_name)
    -> GofReport {
  const auto total = observed.total();
  if (total < 1000) throw TestInapplicable(test_name + ": needs at least 1000 observations, got " + std::to_string(total));

  GofReport report;
  report.test_name = std::move(test_name);
  report.n_samples = total;

  std::int64_t outside = 0;
  for (int v = observed.min_value; v <= observed.max_value(); ++v) {
    if (!pmf.contains(v)) outside += observed.at(v);
  }

  std::vector<double> expected(pmf.size());
  for (std::size_t i = 0; i < pmf.size(); ++i) expected[i] = static_cast<double>(total) * pmf.probs[i];
  const auto bins = pool_from_right(expected, 5.0);
  if (bins.size() < 2) throw TestInapplicable(report.test_name + ": pooling left a single bin");

  report.dof = static_cast<int>(bins.size()) - 1;
  report.pooling_map = describe_bins(bins, pmf.min_support);
  if (outside > 0) {
    report.statistic = std::numeric_limits<double>::infinity();
    report.pooling_map += " out-of-support:" + std::to_string(outside);
    return finish(std::move(report), significance);
  }

  CompensatedSum statistic;
  for (const auto& bin : bins) {
    double e = 0.0;
    std::int64_t o = 0;
    for (int i = bin.first; i <= bin.last; ++i) {
      e += expected[i];
      o += observed.at(pmf.min_support + i);
    }
    const double diff = static_cast<double>(o) - e;
    statistic.add(diff * diff / e);
  }
  report.statistic = std::max(0.0, statistic.value());
  return finish(std::move(report), significance);
}

auto chi_square_gof(const Histogram& observed, const ExactPmf& pmf, double significance, std::string test_name)
    -> GofReport {
  return chi_square_gof(observed, to_float(pmf), significance, std::move(test_name));
}

auto two_sample_chi_square(const Histogram& first, const Histogram& second, double significance,
                           std::string test_name) -> GofReport {
  const double n1 = static_cast<double>(first.total());
  const double n2 = static_cast<double>(second.total());
  if (n1 < 1 || n2 < 1) throw TestInapplicable(test_name + ": both samples must be non-empty");

  const int lo = std::min(first.min_value, second.min_value);
  const int hi = std::max(first.max_value(), second.max_value());
  const double grand = n1 + n2;
  std::vector<double> min_expected(static_cast<std::size_t>(hi - lo) + 1);
  for (int v = lo; v <= hi; ++v) {
    const double column = static_cast<double>(first.at(v) + second.at(v));
    min_expected[v - lo] = std::min(n1, n2) * column / grand;
  }
  const auto bins = pool_from_right(min_expected, 5.0);

  GofReport report;
  report.test_name = std::move(test_name);
  report.n_samples = first.total() + second.total();
  report.dof = static_cast<int>(bins.size()) - 1;
  report.pooling_map = describe_bins(bins, lo);

  CompensatedSum statistic;
  for (const auto& bin : bins) {
    std::int64_t o1 = 0;
    std::int64_t o2 = 0;
    for (int i = bin.first; i <= bin.last; ++i) {
      o1 += first.at(lo + i);
      o2 += second.at(lo + i);
    }
    const double column = static_cast<double>(o1 + o2);
    const double e1 = n1 * column / grand;
    const double e2 = n2 * column / grand;
    if (e1 > 0) statistic.add((o1 - e1) * (o1 - e1) / e1);
    if (e2 > 0) statistic.add((o2 - e2) * (o2 - e2) / e2);
  }
  report.statistic = std::max(0.0, statistic.value());
  return finish(std::move(report), significance);
}

auto ks_uniform(std::span<const double> values, double significance, std::string test_name) -> GofReport {
  if (values.empty()) throw DomainError(test_name + ": empty sample");
  if (values.size() < 100) throw TestInapplicable(test_name + ": needs at least 100 values");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError(test_name + ": values must lie in [0, 1]");
  }
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    d = std::max({d, (i + 1) / m - sorted[i], sorted[i] - i / m});
  }
  GofReport report;
  report.test_name = std::move(test_name);
  report.statistic = d;
  report.dof = 0;
  report.n_samples = static_cast<std::int64_t>(sorted.size());
  report.p_value = kolmogorov_survival(std::sqrt(m) * d);
  report.pass = report.p_value >= significance;
  return report;
}

auto SPosition::name() const -> std::string {
  if (!from_end) return std::to_string(offset);
  return offset == 0 ? "kappa" : "kappa-" + std::to_string(offset);
}

auto reversal_marginal_test(std::span<const CladeRecord> records, std::span<const SPosition> positions,
                            double significance) -> std::vector<GofReport> {
  std::vector<GofReport> reports;
  const int n = records.empty() ? 0 : records.front().n;
  for (const auto& position : positions) {
    std::vector<int> relatives;     // |S_i| - 1
    std::vector<int> nonrelatives;  // n - |S_{kappa-i}|
    for (std::size_t r = 0; r < records.size(); ++r) {
      const auto& rec = records[r];
      if (rec.n != n) throw DomainError("reversal_marginal_test: records mix different n");
      const int i = position.resolve(rec.kappa_n);
      if (i < 0 || i > rec.kappa_n) continue;
      if (r % 2 == 0) {
        relatives.push_back(rec.s_sizes[i] - 1);
      } else {
        nonrelatives.push_back(n - rec.s_sizes[rec.kappa_n - i]);
      }
    }
    const std::string name = "reversal_n" + std::to_string(n) + "_i" + position.name();
    if (relatives.size() < 100 || nonrelatives.size() < 100) {
      throw TestInapplicable(name + ": too few records after exclusion");
    }
    reports.push_back(two_sample_chi_square(Histogram::of(relatives), Histogram::of(nonrelatives), significance, name));
  }
  return reports;
}

auto to_json(const ConvergenceTable& table) -> nlohmann::ordered_json {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json j;
    j["kind"] = row.kind;
    j["n"] = row.n;
    j["k"] = row.k;
    j["x"] = row.x;
    j["value"] = row.value;
    j["target"] = row.target;
    j["abs_error"] = row.abs_error;
    rows.push_back(std::move(j));
  }
  return {{"rows", rows}, {"pass", table.pass}};
}

void write_csv(std::ostream& os, const ConvergenceTable& table) {
  os << "kind,n,k,x,value,target,abs_error\n";
  const auto old_precision = os.precision(17);
  for (const auto& row : table.rows) {
    os << row.kind << ',' << row.n << ',' << row.k << ',' << row.x << ',' << row.value << ',' << row.target << ','
       << row.abs_error << '\n';
  }
  os.precision(old_precision);
}

auto strictly_decreasing(std::span<const double> values) -> bool {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1])) return false;
  }
  return true;
}

auto moment_trend(std::span<const int> k_values, std::span<const int> n_values, const Limits& limits)
    -> ConvergenceTable {
  std::vector<int> ns(n_values.begin(), n_values.end());
  std::sort(ns.begin(), ns.end());
  for (int n : ns) {
    if (n < 3) throw DomainError("moment_trend: every n must be >= 3");
  }
  std::vector<FloatPmf> pmfs;
  pmfs.reserve(ns.size());
  for (int n : ns) pmfs.push_back(mincl_pmf_recursion<double>(n, limits));

  ConvergenceTable table;
  for (int k : k_values) {
    if (k < 1) throw DomainError("moment_trend: k must be >= 1");
    std::vector<double> errors;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      ConvergenceRow row{"moment", ns[i], k, 0.0, scaled_moment_of(pmfs[i], k), 1.0 / k, 0.0};
      row.abs_error = std::abs(row.value - row.target);
      errors.push_back(row.abs_error);
      table.rows.push_back(row);
    }
    table.pass = table.pass && strictly_decreasing(errors);
  }
  return table;
}

auto ks_trend(std::span<const int> n_values, int samples, std::uint64_t seed) -> ConvergenceTable {
  std::vector<int> ns(n_values.begin(), n_values.end());
  std::sort(ns.begin(), ns.end());
  ConvergenceTable table;
  std::vector<double> distances;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int n = ns[i];
    if (n < 2) throw DomainError("ks_trend: every n must be >= 2");
    const double log_n = std::log(double(n));
    auto values = run_replicates(
        static_cast<std::size_t>(samples), seed,
        [n, log_n](RngStream& rng) { return std::log(double(sample_minimal_clade_fast(n, rng))) / log_n; },
        static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(samples));
    const auto report = ks_uniform(values);
    table.rows.push_back({"ks", n, 0, 0.0, report.statistic, 0.0, report.statistic});
    distances.push_back(report.statistic);
  }
  table.pass = strictly_decreasing(distances);
  return table;
}

namespace {

// floor(n^x), robust to pow rounding just below an integer.
auto power_floor(int n, double x) -> int {
  const double raw = std::pow(double(n), x);
  auto t = static_cast<long>(std::floor(raw));
  if (double(t + 1) - raw <= 1e-9 * raw) ++t;
  return static_cast<int>(std::min<long>(t, n));
}

}  // namespace

auto cumulative_table_fraction(int n, std::span<const double> x_grid, int replicates, std::uint64_t seed)
    -> ConvergenceTable {
  if (n < 100) throw DomainError("cumulative_table_fraction: n must be >= 100");
  if (replicates < 1) throw DomainError("cumulative_table_fraction: replicates must be >= 1");
  std::vector<int> thresholds;
  for (double x : x_grid) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("cumulative_table_fraction: grid points must lie in (0, 1]");
    thresholds.push_back(power_floor(n, x));
  }
  const auto fractions = run_replicates(static_cast<std::size_t>(replicates), seed, [&](RngStream& rng) {
    const auto tables = sample_crp(n, rng, CrpMode::CountsOnly);
    std::vector<double> out;
    out.reserve(thresholds.size());
    for (int t : thresholds) {
      const auto below = std::count_if(tables.sizes.begin(), tables.sizes.end(), [t](int s) { return s <= t; });
      out.push_back(double(below) / tables.table_count());
    }
    return out;
  });

  ConvergenceTable table;
  for (std::size_t g = 0; g < x_grid.size(); ++g) {
    CompensatedSum sum;
    for (const auto& f : fractions) sum.add(f[g]);
    const double mean = sum.value() / replicates;
    table.rows.push_back({"table_fraction", n, 0, x_grid[g], mean, x_grid[g], std::abs(mean - x_grid[g])});
  }
  return table;
}

auto table_fraction_trend(std::span<const int> n_values, std::span<const double> x_grid, int replicates,
                          std::uint64_t seed) -> ConvergenceTable {
  std::vector<int> ns(n_values.begin(), n_values.end());
  std::sort(ns.begin(), ns.end());
  ConvergenceTable table;
  std::vector<double> worst;
  for (int n : ns) {
    const auto part = cumulative_table_fraction(n, x_grid, replicates, seed);
    double max_error = 0.0;
    for (const auto& row : part.rows) max_error = std::max(max_error, row.abs_error);
    worst.push_back(max_error);
    table.rows.insert(table.rows.end(), part.rows.begin(), part.rows.end());
  }
  table.pass = strictly_decreasing(worst);
  return table;
}

auto paired_histograms(std::span<const std::int64_t> a, std::span<const std::int64_t> b)
    -> std::pair<Histogram, Histogram> {
  std::map<std::int64_t, int> index;
  for (auto v : a) index.emplace(v, 0);
  for (auto v : b) index.emplace(v, 0);
  int next = 0;
  for (auto& [key, slot] : index) slot = next++;
  std::vector<int> da;
  std::vector<int> db;
  da.reserve(a.size());
  db.reserve(b.size());
  for (auto v : a) da.push_back(index[v]);
  for (auto v : b) db.push_back(index[v]);
  Histogram ha = Histogram::of(da);
  Histogram hb = Histogram::of(db);
  return {ha, hb};
}

}  // namespace minclade
