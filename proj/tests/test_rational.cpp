#include <gtest/gtest.h>

#include "minclade/errors.hpp"
#include "minclade/pmf.hpp"
#include "minclade/rational.hpp"
#include "minclade/rng.hpp"

namespace minclade {
namespace {

TEST(ExactRational, CanonicalForm) {
  const ExactRational a(6, -8);
  EXPECT_EQ(a.numerator(), -3);
  EXPECT_EQ(a.denominator(), 4);
  EXPECT_EQ(a.to_string(), "-3/4");
  EXPECT_EQ(ExactRational(4, 2).to_string(), "2/1");
  EXPECT_EQ(ExactRational(1, 3) + ExactRational(1, 6), ExactRational(1, 2));
  EXPECT_THROW(ExactRational(1, 0), DomainError);
  EXPECT_THROW(ExactRational(1) / ExactRational(0), DomainError);
}

// Random expressions survive the "p/q" round trip and stay canonical.
TEST(ExactRational, StringRoundTripProperty) {
  RngStream rng(42, 0);
  ExactRational acc(1);
  for (int i = 0; i < 500; ++i) {
    const ExactRational step(rng.between(-50, 50), rng.between(1, 60));
    acc = (i % 3 == 0) ? acc * step : acc + step;
    if (acc.is_zero()) acc = ExactRational(1, 7);
    const auto parsed = ExactRational::parse(acc.to_string());
    ASSERT_EQ(parsed, acc);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), acc.numerator().get_mpz_t(), acc.denominator().get_mpz_t());
    ASSERT_EQ(g, 1);
    ASSERT_GT(acc.denominator(), 0);
  }
  EXPECT_EQ(ExactRational::parse("7"), ExactRational(7));
  EXPECT_THROW(ExactRational::parse("abc"), std::invalid_argument);
  EXPECT_THROW(ExactRational::parse("1/0"), DomainError);
}

TEST(ExactRational, Ordering) {
  EXPECT_LT(ExactRational(1, 3), ExactRational(1, 2));
  EXPECT_GT(-ExactRational(1, 3), ExactRational(-1, 2));
  EXPECT_DOUBLE_EQ(ExactRational(5, 12).to_double(), 5.0 / 12.0);
}

TEST(Pmf, TotalsAndAccess) {
  const ExactPmf p{2, {ExactRational(1, 2), ExactRational(1, 3), ExactRational(1, 6)}, {LawKind::MinimalClade, 4}};
  EXPECT_EQ(p.total(), ExactRational(1));
  EXPECT_EQ(p.max_support(), 4);
  EXPECT_EQ(p.at(1), ExactRational(0));
  EXPECT_EQ(p.at(3), ExactRational(1, 3));
  const auto f = to_float(p);
  EXPECT_NEAR(f.total(), 1.0, 1e-15);
  EXPECT_EQ(to_string(p.label), "MinimalClade(4)");
}

TEST(CompensatedSum, RecoversSmallTerms) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000000; ++i) s.add(1e-16);
  EXPECT_NEAR(s.value(), 1.0 + 1e-10, 1e-15);
}

}  // namespace
}  // namespace minclade
