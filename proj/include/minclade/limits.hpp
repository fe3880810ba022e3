#pragma once

namespace minclade {

// Size caps for the exact and simulation routines. All values may be
// overridden through MINCLADE_CAP_<NAME> environment variables, e.g.
// MINCLADE_CAP_PARTITIONS=60.
struct Limits {
  int stirling = 500;            // STIRLING
  int partitions = 45;           // PARTITIONS: integer-partition enumeration
  int compositions = 200;        // COMPOSITIONS: convolution formula
  int recursion_exact = 2000;    // RECURSION_EXACT
  int recursion_float = 100000;  // RECURSION_FLOAT
  int direct = 30;               // DIRECT: rate-based simulator
  int exact_threshold = 200;     // EXACT_THRESHOLD: CLI switches to float above this n

  static auto from_env() -> Limits;
};

// Process-wide defaults, read once from the environment.
auto default_limits() -> const Limits&;

}  // namespace minclade
