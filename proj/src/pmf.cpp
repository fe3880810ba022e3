#include "minclade/pmf.hpp"

namespace minclade {

auto to_string(const LawLabel& label) -> std::string {
  const char* name = "";
  switch (label.kind) {
    case LawKind::MinimalClade: name = "MinimalClade"; break;
    case LawKind::TableCount: name = "TableCount"; break;
    case LawKind::UniformTableSize: name = "UniformTableSize"; break;
    case LawKind::LastCollisionMass: name = "LastCollisionMass"; break;
  }
  return std::string(name) + "(" + std::to_string(label.n) + ")";
}

template <>
auto Pmf<ExactRational>::total() const -> ExactRational {
  ExactRational sum;
  for (const auto& p : probs) sum += p;
  return sum;
}

template <>
auto Pmf<double>::total() const -> double {
  CompensatedSum sum;
  for (double p : probs) sum.add(p);
  return sum.value();
}

auto to_float(const ExactPmf& pmf) -> FloatPmf {
  FloatPmf out{pmf.min_support, {}, pmf.label};
  out.probs.reserve(pmf.size());
  for (const auto& p : pmf.probs) out.probs.push_back(p.to_double());
  return out;
}

}  // namespace minclade
