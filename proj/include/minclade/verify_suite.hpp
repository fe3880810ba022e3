#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "minclade/rng.hpp"
#include "minclade/stat_harness.hpp"

namespace minclade {

// Sections of the verification suite, selectable with `verify --only`.
inline const std::vector<std::string> kVerifySections = {
    "formulas",     // exact three-formula sweep and closed-form atoms
    "simulation",   // simulated X_n against the exact law
    "identities",   // X_n - 1, M_n and RT_{n-1}
    "reversal",     // time reversal of the block-of-1 process
    "equivalence",  // cutting construction against the rate-based simulator
    "moments",      // moment scaling trend
    "ks",           // uniform-limit KS trend
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  int replicates = 100000;
  int ks_samples = 10000;
  double significance = kDefaultSignificance;  // family-wise; Bonferroni-split over stochastic reports
  std::set<std::string> sections{kVerifySections.begin(), kVerifySections.end()};
  // Replaces the fast X_n sampler; used to check that defects are detected.
  std::function<int(int, RngStream&)> fast_sampler;
};

struct VerifyBundle {
  std::vector<GofReport> reports;
  std::uint64_t seed = 0;
  std::int64_t wall_time_ms = 0;

  auto passed() const -> int;
  auto all_passed() const -> bool { return passed() == static_cast<int>(reports.size()); }
};

auto run_verify_suite(const VerifyOptions& options) -> VerifyBundle;

// {"reports": [...], "summary": {total, passed, seed[, wall_time_ms]}}.
auto to_json(const VerifyBundle& bundle, bool include_timing) -> nlohmann::ordered_json;

}  // namespace minclade
