#include "minclade/verify_suite.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <map>
#include <string>

#include "minclade/coalescent_sim.hpp"
#include "minclade/crp_sim.hpp"
#include "minclade/errors.hpp"
#include "minclade/exact_dist.hpp"
#include "minclade/replicates.hpp"

namespace minclade {
namespace {

// Each stochastic check draws from its own block of stream ids.
auto stream_block(std::uint64_t check_id) -> std::uint64_t { return check_id << 32; }

auto deterministic_report(std::string name, std::int64_t mismatches, std::int64_t checked) -> GofReport {
  GofReport report;
  report.test_name = std::move(name);
  report.statistic = static_cast<double>(mismatches);
  report.dof = 0;
  report.p_value = mismatches == 0 ? 1.0 : 0.0;
  report.pass = mismatches == 0;
  report.n_samples = checked;
  return report;
}

auto failed_report(std::string name, std::int64_t samples) -> GofReport {
  GofReport report;
  report.test_name = std::move(name);
  report.statistic = std::numeric_limits<double>::infinity();
  report.p_value = 0.0;
  report.pass = false;
  report.n_samples = samples;
  return report;
}

class Suite {
 public:
  explicit Suite(const VerifyOptions& options) : opt_(options) {
    int stochastic = 0;
    if (enabled("simulation")) stochastic += 6;
    if (enabled("identities")) stochastic += 6;
    if (enabled("reversal")) stochastic += 2;
    if (enabled("equivalence")) stochastic += 4;
    alpha_ = stochastic > 0 ? opt_.significance / stochastic : opt_.significance;
  }

  auto run() -> VerifyBundle {
    if (enabled("formulas")) formulas();
    if (enabled("simulation")) simulation();
    if (enabled("identities")) identities();
    if (enabled("reversal")) reversal();
    if (enabled("equivalence")) equivalence();
    if (enabled("moments")) moments();
    if (enabled("ks")) ks();
    VerifyBundle bundle;
    bundle.reports = std::move(reports_);
    bundle.seed = opt_.seed;
    return bundle;
  }

 private:
  auto enabled(const std::string& section) const -> bool { return opt_.sections.contains(section); }

  void add(GofReport report) {
    report.seed = opt_.seed;
    reports_.push_back(std::move(report));
  }

  auto replicates() const -> std::size_t { return static_cast<std::size_t>(opt_.replicates); }

  void add_gof(const std::string& name, const std::vector<int>& values, const ExactPmf& pmf) {
    try {
      add(chi_square_gof(Histogram::of(values), pmf, alpha_, name));
    } catch (const TestInapplicable&) {
      add(failed_report(name, static_cast<std::int64_t>(values.size())));
    }
  }

  void add_two_sample(const std::string& name, const std::vector<int>& a, const std::vector<int>& b) {
    try {
      add(two_sample_chi_square(Histogram::of(a), Histogram::of(b), alpha_, name));
    } catch (const TestInapplicable&) {
      add(failed_report(name, static_cast<std::int64_t>(a.size() + b.size())));
    }
  }

  void formulas() {
    std::int64_t mismatches = 0;
    std::int64_t checked = 0;
    for (int n = 2; n <= 30; ++n) {
      const auto rec = mincl_pmf_recursion<ExactRational>(n);
      const auto par = mincl_pmf_partitions(n);
      const auto com = mincl_pmf_compositions(n);
      for (int v = 2; v <= n; ++v) {
        ++checked;
        if (!(rec.at(v) == par.at(v) && rec.at(v) == com.at(v))) ++mismatches;
      }
      if (rec.size() != par.size() || rec.size() != com.size()) ++mismatches;
    }
    add(deterministic_report("formulas.three_way_agreement_n2_30", mismatches, checked));

    std::int64_t bad_norm = 0;
    std::int64_t bad_tail = 0;
    for (int n = 2; n <= 200; ++n) {
      const auto rec = mincl_pmf_recursion<ExactRational>(n);
      if (rec.total() != ExactRational(1)) ++bad_norm;
      if (rec.at(n) != ExactRational(1, n - 1)) ++bad_tail;
    }
    add(deterministic_report("formulas.normalization_n2_200", bad_norm, 199));
    add(deterministic_report("formulas.tail_atom_n2_200", bad_tail, 199));

    std::int64_t bad_atoms = 0;
    if (mincl_pmf_recursion<ExactRational>(3).at(2) != ExactRational(1, 2)) ++bad_atoms;
    if (mincl_pmf_recursion<ExactRational>(4).at(2) != ExactRational(5, 12)) ++bad_atoms;
    add(deterministic_report("formulas.small_atoms", bad_atoms, 2));
  }

  auto fast_sampler() const -> std::function<int(int, RngStream&)> {
    if (opt_.fast_sampler) return opt_.fast_sampler;
    return [](int n, RngStream& rng) { return sample_minimal_clade_fast(n, rng); };
  }

  void simulation() {
    const auto fast = fast_sampler();
    std::uint64_t check = 1;
    for (int n : {5, 10, 20}) {
      const auto exact = mincl_pmf_recursion<ExactRational>(n);
      const auto cut = run_replicates(
          replicates(), opt_.seed,
          [n](RngStream& rng) { return extract_minimal_clade(cut_jump_chain(sample_recursive_tree(n, rng), rng)); },
          stream_block(check++));
      add_gof("simulation.cut_x_n" + std::to_string(n), cut, exact);
      const auto crp = run_replicates(
          replicates(), opt_.seed, [n, &fast](RngStream& rng) { return fast(n, rng); }, stream_block(check++));
      add_gof("simulation.crp_x_n" + std::to_string(n), crp, exact);
    }
  }

  void identities() {
    constexpr int n = 10;
    const auto x_minus_one = run_replicates(
        replicates(), opt_.seed, [](RngStream& rng) { return sample_clade_record_cut(n, rng).x_n - 1; },
        stream_block(20));
    const auto mass = run_replicates(
        replicates(), opt_.seed, [](RngStream& rng) { return sample_clade_record_cut(n, rng).m_n; },
        stream_block(21));
    const auto table = run_replicates(
        replicates(), opt_.seed,
        [](RngStream& rng) { return uniform_table_size(sample_crp(n - 1, rng), rng); }, stream_block(22));
    const auto exact = rt_pmf<ExactRational>(n - 1);
    add_two_sample("identities.x_minus_1_vs_m_n10", x_minus_one, mass);
    add_two_sample("identities.x_minus_1_vs_rt9", x_minus_one, table);
    add_two_sample("identities.m_vs_rt9_n10", mass, table);
    add_gof("identities.x_minus_1_exact_n10", x_minus_one, exact);
    add_gof("identities.m_exact_n10", mass, exact);
    add_gof("identities.rt9_exact", table, exact);
  }

  void reversal() {
    constexpr int n = 8;
    const auto records = run_replicates(
        replicates(), opt_.seed, [](RngStream& rng) { return sample_clade_record_cut(n, rng); }, stream_block(30));
    const std::vector<SPosition> positions{SPosition::start(1), SPosition::end(1)};
    try {
      for (auto& report : reversal_marginal_test(records, positions, alpha_)) add(std::move(report));
    } catch (const TestInapplicable&) {
      add(failed_report("reversal_n8", static_cast<std::int64_t>(records.size())));
    }
  }

  void equivalence() {
    std::uint64_t check = 40;
    for (int n = 5; n <= 8; ++n) {
      const auto cut = run_replicates(
          replicates(), opt_.seed,
          [n](RngStream& rng) {
            return partition_code(cut_jump_chain(sample_recursive_tree(n, rng), rng).partition_after(1), n);
          },
          stream_block(check++));
      const auto direct = run_replicates(
          replicates(), opt_.seed,
          [n](RngStream& rng) { return partition_code(simulate_bs_direct(n, rng).partition_after(1), n); },
          stream_block(check++));
      const auto [hc, hd] = paired_histograms(cut, direct);
      try {
        add(two_sample_chi_square(hc, hd, alpha_, "equivalence.first_partition_n" + std::to_string(n)));
      } catch (const TestInapplicable&) {
        add(failed_report("equivalence.first_partition_n" + std::to_string(n), 0));
      }
    }
  }

  void moments() {
    const std::vector<int> ks{1, 2, 3};
    const std::vector<int> ns{100, 1000, 10000};
    const auto table = moment_trend(ks, ns);
    double worst = 0.0;
    for (const auto& row : table.rows) {
      if (row.n == ns.back()) worst = std::max(worst, row.abs_error);
    }
    GofReport report = deterministic_report("moments.scaled_moment_trend", table.pass ? 0 : 1,
                                            static_cast<std::int64_t>(table.rows.size()));
    report.statistic = worst;
    add(std::move(report));
  }

  void ks() {
    const std::vector<int> ns{1000, 10000, 100000};
    const auto table = ks_trend(ns, opt_.ks_samples, opt_.seed);
    GofReport report = deterministic_report("ks.log_ratio_uniform_trend", table.pass ? 0 : 1,
                                            static_cast<std::int64_t>(opt_.ks_samples) * 3);
    report.statistic = table.rows.back().value;
    add(std::move(report));
  }

  const VerifyOptions& opt_;
  double alpha_;
  std::vector<GofReport> reports_;
};

}  // namespace

auto VerifyBundle::passed() const -> int {
  int count = 0;
  for (const auto& r : reports) count += r.pass ? 1 : 0;
  return count;
}

auto run_verify_suite(const VerifyOptions& options) -> VerifyBundle {
  for (const auto& section : options.sections) {
    if (std::find(kVerifySections.begin(), kVerifySections.end(), section) == kVerifySections.end()) {
      throw std::invalid_argument("unknown verify section '" + section + "'");
    }
  }
  const auto start = std::chrono::steady_clock::now();
  auto bundle = Suite(options).run();
  bundle.wall_time_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return bundle;
}

auto to_json(const VerifyBundle& bundle, bool include_timing) -> nlohmann::ordered_json {
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (const auto& r : bundle.reports) reports.push_back(to_json(r));
  nlohmann::ordered_json summary;
  summary["total"] = bundle.reports.size();
  summary["passed"] = bundle.passed();
  summary["seed"] = bundle.seed;
  if (include_timing) summary["wall_time_ms"] = bundle.wall_time_ms;
  return {{"reports", reports}, {"summary", summary}};
}

}  // namespace minclade
