#pragma once

// Jump chain of the Bolthausen-Sznitman n-coalescent, realised either by
// cutting a uniform random recursive tree or directly from the merger rates,
// and the functionals of the block containing individual 1.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "minclade/limits.hpp"
#include "minclade/rational.hpp"
#include "minclade/rng.hpp"

namespace minclade {

// Rooted labelled tree on {1, ..., n} with parent(i) < i; vertex 1 is the root.
class RecursiveTree {
 public:
  RecursiveTree(int n, std::vector<int> parents);  // parents[i] for i = 0..n, entries 0 and 1 unused

  auto n() const -> int { return n_; }
  auto parent(int vertex) const -> int { return parent_[vertex]; }
  auto parents() const -> const std::vector<int>& { return parent_; }

 private:
  int n_;
  std::vector<int> parent_;
};

auto sample_recursive_tree(int n, RngStream& rng) -> RecursiveTree;

// A block of the current partition. Every block is identified by its least
// label; the labels themselves are recovered by replaying the trace.
struct BlockRef {
  int least_label;
  int size;
  friend auto operator==(const BlockRef&, const BlockRef&) -> bool = default;
};

// One jump: the listed blocks (at least two) merge into a single block whose
// least label is the minimum of theirs. Parts are sorted by least label.
struct MergeEvent {
  std::vector<BlockRef> parts;

  auto merged_size() const -> int;
  auto involves_one() const -> bool { return !parts.empty() && parts.front().least_label == 1; }
};

using Partition = std::vector<std::vector<int>>;  // blocks as sorted label lists, sorted by least label

class JumpChainTrace {
 public:
  explicit JumpChainTrace(int n) : n_(n) {}

  auto n() const -> int { return n_; }
  auto events() const -> const std::vector<MergeEvent>& { return events_; }
  auto size() const -> std::size_t { return events_.size(); }

  void push(MergeEvent event) { events_.push_back(std::move(event)); }

  // Partition after the first `steps` events (0 gives singletons).
  auto partition_after(std::size_t steps) const -> Partition;
  // Labels of the block containing 1 after `steps` events.
  auto block_of_one_after(std::size_t steps) const -> std::vector<int>;

  // Checks disjointness/coverage, merge arity and termination in [n].
  auto is_valid() const -> bool;

  // One line per event: the merged blocks as space-separated sorted label
  // lists in braces, e.g. "{1 4} {2} {7}".
  void dump(std::ostream& os) const;

 private:
  int n_;
  std::vector<MergeEvent> events_;
};

// Cutting construction: repeatedly delete a uniform edge of the
// root-containing subtree; all labels of the detached subtree join the
// block at the root-side endpoint.
auto cut_jump_chain(const RecursiveTree& tree, RngStream& rng) -> JumpChainTrace;

// Rate at which one given k-tuple among b blocks merges: (k-2)! (b-k)! / (b-1)!.
auto bs_rate(int b, int k) -> ExactRational;

// Probability that the next jump from b blocks merges exactly k of them.
auto merger_size_probabilities(int b) -> std::vector<double>;  // index k, entries 0 and 1 zero

// Direct simulation of the jump chain from the merger rates.
auto simulate_bs_direct(int n, RngStream& rng, const Limits& limits = default_limits()) -> JumpChainTrace;

struct CladeRecord {
  int n = 0;
  int x_n = 0;               // minimal clade size of individual 1
  int m_n = 0;               // mass outside the block of 1 before the last jump
  int kappa_n = 0;           // number of jumps involving 1
  std::vector<int> s_sizes;  // |S_0| = 1, ..., |S_kappa| = n
};

auto extract_minimal_clade(const JumpChainTrace& trace) -> int;
auto extract_last_collision_mass(const JumpChainTrace& trace) -> int;
auto extract_s_process(const JumpChainTrace& trace) -> CladeRecord;

// One realisation through the cutting construction, reduced to its record.
auto sample_clade_record_cut(int n, RngStream& rng) -> CladeRecord;

// Encodes a partition of [n] as the base-n number formed by the block index
// of each label, blocks numbered in order of appearance. Requires n <= 15.
auto partition_code(const Partition& partition, int n) -> std::int64_t;

}  // namespace minclade
