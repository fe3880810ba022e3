#include <gtest/gtest.h>

#include <cmath>

#include "minclade/coalescent_sim.hpp"
#include "minclade/crp_sim.hpp"
#include "minclade/errors.hpp"
#include "minclade/exact_dist.hpp"
#include "minclade/replicates.hpp"
#include "minclade/stat_harness.hpp"
#include "test_support.hpp"

namespace minclade {
namespace {

using testing_support::sample_from;

constexpr std::uint64_t kSeed = 42;

TEST(ChiSquareSurvival, KnownQuantiles) {
  EXPECT_NEAR(chi_square_survival(3.841458820694124, 1), 0.05, 1e-10);
  EXPECT_NEAR(chi_square_survival(18.307038053275146, 10), 0.05, 1e-10);
  EXPECT_NEAR(chi_square_survival(2.0, 2), std::exp(-1.0), 1e-12);
  EXPECT_EQ(chi_square_survival(0.0, 3), 1.0);
}

TEST(KolmogorovSurvival, KnownValues) {
  EXPECT_NEAR(kolmogorov_survival(1.3580986393225505), 0.05, 1e-6);
  EXPECT_NEAR(kolmogorov_survival(1.2238478702170823), 0.10, 1e-6);
  EXPECT_NEAR(kolmogorov_survival(0.5), 0.9639452436648751, 1e-9);
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
  // both series agree where they meet
  EXPECT_NEAR(kolmogorov_survival(0.999999), kolmogorov_survival(1.000001), 1e-5);
}

TEST(ChiSquareGof, ProportionalCountsGiveZero) {
  const auto pmf = mincl_pmf_recursion<ExactRational>(4);  // 5/12, 1/4, 1/3
  const Histogram h{2, {5000, 3000, 4000}};
  const auto report = chi_square_gof(h, pmf);
  EXPECT_EQ(report.statistic, 0.0);
  EXPECT_EQ(report.p_value, 1.0);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.dof, 2);
  EXPECT_EQ(report.n_samples, 12000);
}

TEST(ChiSquareGof, PoolsRightTail) {
  FloatPmf pmf{0, {0.5, 0.49, 0.004, 0.003, 0.003}, {}};
  const Histogram h{0, {500, 490, 4, 3, 3}};
  const auto report = chi_square_gof(h, pmf);
  EXPECT_EQ(report.pooling_map, "[0] [1..2] [3..4]");
  EXPECT_EQ(report.dof, 2);
}

TEST(ChiSquareGof, ErrorsAndOutOfSupport) {
  FloatPmf pmf{0, {1.0}, {}};
  EXPECT_THROW(chi_square_gof(Histogram{0, {5000}}, pmf), TestInapplicable);
  FloatPmf two{0, {0.5, 0.5}, {}};
  EXPECT_THROW(chi_square_gof(Histogram{0, {10, 10}}, two), TestInapplicable);
  const auto report = chi_square_gof(Histogram{0, {600, 500, 1}}, two);
  EXPECT_FALSE(report.pass);
  EXPECT_EQ(report.p_value, 0.0);
}

TEST(ChiSquareGof, DetectsMissingShift) {
  constexpr int draws = 100000;
  const auto rt = to_float(rt_pmf<ExactRational>(9));
  const auto raw = run_replicates(draws, kSeed, [&](RngStream& rng) { return sample_from(rt, rng); });
  std::vector<int> plus_one(raw);
  for (int& v : plus_one) ++v;
  const auto exact10 = mincl_pmf_recursion<ExactRational>(10);
  EXPECT_TRUE(chi_square_gof(Histogram::of(plus_one), exact10).pass);
  EXPECT_FALSE(chi_square_gof(Histogram::of(raw), exact10).pass);
  // RT_9 and X_10 are the same law up to the shift, so shifting the pmf works too.
  EXPECT_TRUE(chi_square_gof(Histogram::of(raw), shifted(exact10, -1, {LawKind::UniformTableSize, 9})).pass);
}

TEST(ChiSquareGof, FixedSeedRegressionAtTen) {
  const auto exact10 = to_float(mincl_pmf_recursion<ExactRational>(10));
  const auto x = run_replicates(100000, kSeed, [&](RngStream& rng) { return sample_from(exact10, rng); });
  const auto report = chi_square_gof(Histogram::of(x), exact10);
  EXPECT_TRUE(report.pass);
  EXPECT_GE(report.p_value, 1e-3);
}

// Null data from the pmf itself rejects at no more than twice the nominal rate.
TEST(Calibration, ChiSquareUnderNull) {
  constexpr double alpha = 0.05;
  const auto pmf = to_float(mincl_pmf_recursion<ExactRational>(12));
  int rejections = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    const auto x = run_replicates(5000, kSeed, [&](RngStream& rng) { return sample_from(pmf, rng); }, rep << 32);
    rejections += chi_square_gof(Histogram::of(x), pmf, alpha).pass ? 0 : 1;
  }
  EXPECT_LE(rejections, static_cast<int>(2 * alpha * 200));
}

TEST(Calibration, KsUnderNull) {
  constexpr double alpha = 0.05;
  int rejections = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    const auto u = run_replicates(1000, kSeed, [](RngStream& rng) { return rng.uniform(); }, rep << 32);
    rejections += ks_uniform(u, alpha).pass ? 0 : 1;
  }
  EXPECT_LE(rejections, static_cast<int>(2 * alpha * 200));
}

TEST(TwoSample, IdenticalAndDegenerate) {
  const Histogram a{1, {100, 200, 300}};
  const auto same = two_sample_chi_square(a, a);
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_TRUE(same.pass);
  const Histogram point{1, {500}};
  const auto degenerate = two_sample_chi_square(point, point);
  EXPECT_EQ(degenerate.statistic, 0.0);
  EXPECT_EQ(degenerate.dof, 0);
  EXPECT_TRUE(degenerate.pass);
  const Histogram b{1, {300, 200, 100}};
  EXPECT_FALSE(two_sample_chi_square(a, b).pass);
  EXPECT_THROW(two_sample_chi_square(a, Histogram{}), TestInapplicable);
}

TEST(Ks, GridAndDegenerateSamples) {
  std::vector<double> grid;
  for (int i = 1; i <= 1000; ++i) grid.push_back(i / 1000.0);
  const auto g = ks_uniform(grid);
  EXPECT_NEAR(g.statistic, 1.0 / 1000, 1e-12);
  EXPECT_GT(g.p_value, 0.999);

  const std::vector<double> zeros(500, 0.0);
  const auto z = ks_uniform(zeros);
  EXPECT_DOUBLE_EQ(z.statistic, 1.0);
  EXPECT_LT(z.p_value, 1e-12);
  EXPECT_FALSE(z.pass);

  EXPECT_THROW(ks_uniform(std::vector<double>{}), DomainError);
  EXPECT_THROW(ks_uniform(std::vector<double>(10, 0.5)), TestInapplicable);
  EXPECT_THROW(ks_uniform(std::vector<double>(200, 1.5)), DomainError);
}

auto cut_records(int n, int count, std::uint64_t seed) -> std::vector<CladeRecord> {
  return run_replicates(static_cast<std::size_t>(count), seed, [n](RngStream& rng) { return sample_clade_record_cut(n, rng); });
}

TEST(Reversal, DegenerateAtTwo) {
  const auto records = cut_records(2, 1000, kSeed);
  const std::vector<SPosition> positions{SPosition::start(1)};
  const auto reports = reversal_marginal_test(records, positions);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].statistic, 0.0);
  EXPECT_TRUE(reports[0].pass);
}

TEST(Reversal, FixedSeedVerdicts) {
  const auto records8 = cut_records(8, 100000, kSeed);
  const std::vector<SPosition> positions{SPosition::start(1), SPosition::start(2), SPosition::end(1)};
  for (const auto& r : reversal_marginal_test(records8, positions)) EXPECT_TRUE(r.pass) << r.test_name << " p=" << r.p_value;

  // Position 1 at n = 10 is the X_n - 1 versus M_n identity.
  const auto records10 = cut_records(10, 100000, kSeed + 1);
  const std::vector<SPosition> first{SPosition::start(1)};
  EXPECT_TRUE(reversal_marginal_test(records10, first).front().pass);
}

TEST(Reversal, TooFewRecords) {
  const auto records = cut_records(8, 50, kSeed);
  const std::vector<SPosition> positions{SPosition::start(1)};
  EXPECT_THROW(reversal_marginal_test(records, positions), TestInapplicable);
}

TEST(Reversal, DetectsSizeBiasedTableOrder) {
  // Growing the block of 1 by tables in size-biased order instead of uniform
  // order breaks the reversal identity.
  constexpr int n = 8;
  const auto records = run_replicates(20000, kSeed, [](RngStream& rng) {
    auto sizes = sample_crp(n - 1, rng, CrpMode::CountsOnly).sizes;
    CladeRecord rec;
    rec.n = n;
    rec.s_sizes = {1};
    int remaining = n - 1;
    while (!sizes.empty()) {
      auto pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(remaining)));
      std::size_t t = 0;
      while (pick >= sizes[t]) pick -= sizes[t++];
      rec.s_sizes.push_back(rec.s_sizes.back() + sizes[t]);
      remaining -= sizes[t];
      sizes.erase(sizes.begin() + static_cast<std::ptrdiff_t>(t));
    }
    rec.kappa_n = static_cast<int>(rec.s_sizes.size()) - 1;
    rec.x_n = rec.s_sizes[1];
    rec.m_n = n - rec.s_sizes[rec.kappa_n - 1];
    return rec;
  });
  const std::vector<SPosition> positions{SPosition::start(1)};
  EXPECT_FALSE(reversal_marginal_test(records, positions).front().pass);
}

TEST(MomentTrend, SmallAndLarge) {
  const std::vector<int> k1{1};
  const std::vector<int> n4{4};
  const auto single = moment_trend(k1, n4);
  ASSERT_EQ(single.rows.size(), 1u);
  EXPECT_NEAR(single.rows[0].value, 1.0108396383165869, 1e-12);
  EXPECT_EQ(single.rows[0].target, 1.0);

  const std::vector<int> ks{1, 2};
  const std::vector<int> ns{100, 1000};
  const auto table = moment_trend(ks, ns);
  EXPECT_TRUE(table.pass);
  for (const auto& row : table.rows) EXPECT_DOUBLE_EQ(row.abs_error, std::abs(row.value - 1.0 / row.k));
  const std::vector<int> bad{2};
  EXPECT_THROW(moment_trend(k1, bad), DomainError);
}

TEST(TableFraction, EndpointsAndRegression) {
  const std::vector<double> grid{0.5, 1.0};
  const auto table = cumulative_table_fraction(10000, grid, 1000, kSeed);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_NEAR(table.rows[0].value, 0.5, 0.1);
  EXPECT_EQ(table.rows[1].value, 1.0);
  const std::vector<double> zero{0.0};
  EXPECT_THROW(cumulative_table_fraction(1000, zero, 10, kSeed), DomainError);
  EXPECT_THROW(cumulative_table_fraction(50, grid, 10, kSeed), DomainError);
}

TEST(PairedHistograms, SharedIndex) {
  const std::vector<std::int64_t> a{100, 7, 7};
  const std::vector<std::int64_t> b{7, 5000};
  const auto [ha, hb] = paired_histograms(a, b);
  EXPECT_EQ(ha.min_value, 0);
  EXPECT_EQ(ha.at(0), 2);  // key 7
  EXPECT_EQ(ha.at(1), 1);  // key 100
  EXPECT_EQ(ha.at(2), 0);  // key 5000
  EXPECT_EQ(hb.at(0), 1);
  EXPECT_EQ(hb.at(1), 0);
  EXPECT_EQ(hb.at(2), 1);
}

TEST(Json, ReportSchema) {
  GofReport r{"t", 1.5, 2, 0.25, true, 1000, "[1] [2]", 42};
  const auto j = to_json(r);
  EXPECT_EQ(j.dump(), R"({"test_name":"t","statistic":1.5,"dof":2,"p_value":0.25,"pass":true,"n_samples":1000,"seed":42})");
}

}  // namespace
}  // namespace minclade
