#include "minclade/limits.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace minclade {
namespace {

void override_from_env(const char* name, int& value) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return;
  try {
    std::size_t used = 0;
    int parsed = std::stoi(raw, &used);
    if (used != std::string(raw).size() || parsed < 1) throw std::invalid_argument(raw);
    value = parsed;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("invalid value for ") + name + ": '" + raw + "'");
  }
}

}  // namespace

auto Limits::from_env() -> Limits {
  Limits l;
  override_from_env("MINCLADE_CAP_STIRLING", l.stirling);
  override_from_env("MINCLADE_CAP_PARTITIONS", l.partitions);
  override_from_env("MINCLADE_CAP_COMPOSITIONS", l.compositions);
  override_from_env("MINCLADE_CAP_RECURSION_EXACT", l.recursion_exact);
  override_from_env("MINCLADE_CAP_RECURSION_FLOAT", l.recursion_float);
  override_from_env("MINCLADE_CAP_DIRECT", l.direct);
  override_from_env("MINCLADE_CAP_EXACT_THRESHOLD", l.exact_threshold);
  return l;
}

auto default_limits() -> const Limits& {
  static const Limits limits = Limits::from_env();
  return limits;
}

}  // namespace minclade
