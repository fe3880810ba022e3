#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "minclade/rational.hpp"

namespace minclade {

enum class LawKind {
  MinimalClade,       // X_n, support {2,...,n}
  TableCount,         // K_n, support {1,...,n}
  UniformTableSize,   // RT_n, support {1,...,n}
  LastCollisionMass,  // M_n, support {1,...,n-1}
};

struct LawLabel {
  LawKind kind;
  int n;
  friend auto operator==(const LawLabel&, const LawLabel&) -> bool = default;
};

auto to_string(const LawLabel& label) -> std::string;

// Probability mass function on {min_support, ..., min_support + size() - 1}.
// P is ExactRational for the exact variant and double for the floating one.
template <typename P>
struct Pmf {
  int min_support = 0;
  std::vector<P> probs;
  LawLabel label{LawKind::MinimalClade, 0};

  auto size() const -> std::size_t { return probs.size(); }
  auto max_support() const -> int { return min_support + static_cast<int>(probs.size()) - 1; }
  auto contains(int value) const -> bool { return value >= min_support && value <= max_support(); }

  // Zero outside the support.
  auto at(int value) const -> P { return contains(value) ? probs[value - min_support] : P(0); }

  // Exact sum for rationals, compensated sum for doubles.
  auto total() const -> P;

  friend auto operator==(const Pmf&, const Pmf&) -> bool = default;
};

using ExactPmf = Pmf<ExactRational>;
using FloatPmf = Pmf<double>;

auto to_float(const ExactPmf& pmf) -> FloatPmf;

// Same probabilities on the support shifted by `offset`.
template <typename P>
auto shifted(Pmf<P> pmf, int offset, LawLabel label) -> Pmf<P> {
  pmf.min_support += offset;
  pmf.label = label;
  return pmf;
}

// Kahan-Babuska compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  auto value() const -> double { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace minclade
