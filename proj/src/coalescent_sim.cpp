#include "minclade/coalescent_sim.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "minclade/errors.hpp"

namespace minclade {

RecursiveTree::RecursiveTree(int n, std::vector<int> parents) : n_(n), parent_(std::move(parents)) {
  if (n < 1) throw DomainError("recursive tree needs n >= 1");
  if (parent_.size() != static_cast<std::size_t>(n) + 1) throw std::invalid_argument("parent array must have n + 1 slots");
  parent_[0] = 0;
  parent_[1] = 0;
  for (int v = 2; v <= n; ++v) {
    if (parent_[v] < 1 || parent_[v] >= v) {
      throw std::invalid_argument("parent(" + std::to_string(v) + ") must lie in [1, " + std::to_string(v - 1) + "]");
    }
  }
}

auto sample_recursive_tree(int n, RngStream& rng) -> RecursiveTree {
  if (n < 1) throw DomainError("sample_recursive_tree: n must be >= 1");
  std::vector<int> parents(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 2; v <= n; ++v) parents[v] = static_cast<int>(rng.between(1, v - 1));
  return RecursiveTree(n, std::move(parents));
}

auto MergeEvent::merged_size() const -> int {
  int total = 0;
  for (const auto& part : parts) total += part.size;
  return total;
}

namespace {

// Label sets of the current blocks keyed by least label.
class LabelReplay {
 public:
  explicit LabelReplay(int n) {
    for (int v = 1; v <= n; ++v) blocks_[v] = {v};
  }

  auto blocks() const -> const std::map<int, std::vector<int>>& { return blocks_; }

  auto labels(int least) const -> const std::vector<int>& { return blocks_.at(least); }

  // Returns false if the event does not match the current partition.
  auto apply(const MergeEvent& event) -> bool {
    if (event.parts.size() < 2) return false;
    for (std::size_t i = 0; i < event.parts.size(); ++i) {
      const auto& part = event.parts[i];
      if (i > 0 && part.least_label <= event.parts[i - 1].least_label) return false;
      auto it = blocks_.find(part.least_label);
      if (it == blocks_.end() || static_cast<int>(it->second.size()) != part.size) return false;
    }
    auto& target = blocks_[event.parts.front().least_label];
    for (std::size_t i = 1; i < event.parts.size(); ++i) {
      auto node = blocks_.extract(event.parts[i].least_label);
      target.insert(target.end(), node.mapped().begin(), node.mapped().end());
    }
    std::sort(target.begin(), target.end());
    return true;
  }

 private:
  std::map<int, std::vector<int>> blocks_;
};

}  // namespace

auto JumpChainTrace::partition_after(std::size_t steps) const -> Partition {
  if (steps > events_.size()) throw std::out_of_range("partition_after: trace has fewer events");
  LabelReplay replay(n_);
  for (std::size_t t = 0; t < steps; ++t) {
    if (!replay.apply(events_[t])) throw std::logic_error("inconsistent trace at event " + std::to_string(t));
  }
  Partition out;
  out.reserve(replay.blocks().size());
  for (const auto& [least, labels] : replay.blocks()) out.push_back(labels);
  return out;
}

auto JumpChainTrace::block_of_one_after(std::size_t steps) const -> std::vector<int> {
  return partition_after(steps).front();
}

auto JumpChainTrace::is_valid() const -> bool {
  if (n_ < 1) return false;
  LabelReplay replay(n_);
  for (const auto& event : events_) {
    if (!replay.apply(event)) return false;
  }
  return replay.blocks().size() == 1;
}

void JumpChainTrace::dump(std::ostream& os) const {
  LabelReplay replay(n_);
  for (const auto& event : events_) {
    bool first = true;
    for (const auto& part : event.parts) {
      if (!first) os << ' ';
      first = false;
      os << '{';
      const auto& labels = replay.labels(part.least_label);
      for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? " " : "") << labels[i];
      os << '}';
    }
    os << '\n';
    if (!replay.apply(event)) throw std::logic_error("inconsistent trace");
  }
}

auto cut_jump_chain(const RecursiveTree& tree, RngStream& rng) -> JumpChainTrace {
  const int n = tree.n();
  if (n < 2) throw DomainError("cut_jump_chain: tree needs n >= 2");

  // Children in CSR form.
  std::vector<int> child_start(static_cast<std::size_t>(n) + 2, 0);
  for (int v = 2; v <= n; ++v) ++child_start[tree.parent(v) + 1];
  for (int v = 1; v <= n + 1; ++v) child_start[v] += child_start[v - 1];
  std::vector<int> children(static_cast<std::size_t>(n) - 1);
  {
    auto fill = child_start;
    for (int v = 2; v <= n; ++v) children[fill[tree.parent(v)]++] = v;
  }

  // Live edges of the root component, each named by its child endpoint.
  std::vector<int> live(static_cast<std::size_t>(n) - 1);
  std::vector<int> slot(static_cast<std::size_t>(n) + 1, -1);
  for (int v = 2; v <= n; ++v) {
    live[v - 2] = v;
    slot[v] = v - 2;
  }
  auto drop_edge = [&](int v) {
    const int s = slot[v];
    const int last = live.back();
    live[s] = last;
    slot[last] = s;
    live.pop_back();
    slot[v] = -1;
  };

  std::vector<int> mass(static_cast<std::size_t>(n) + 1, 1);  // labels held by each vertex
  std::vector<char> attached(static_cast<std::size_t>(n) + 1, 1);
  std::vector<int> stack;
  JumpChainTrace trace(n);

  while (!live.empty()) {
    const int cut = live[rng.below(live.size())];
    const int anchor = tree.parent(cut);

    MergeEvent event;
    event.parts.push_back({anchor, mass[anchor]});
    int absorbed = 0;
    stack.assign(1, cut);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      attached[u] = 0;
      drop_edge(u);
      event.parts.push_back({u, mass[u]});
      absorbed += mass[u];
      for (int c = child_start[u]; c < child_start[u + 1]; ++c) {
        if (attached[children[c]]) stack.push_back(children[c]);
      }
    }
    mass[anchor] += absorbed;
    // The anchor is an ancestor of every detached vertex, so it stays first.
    std::sort(event.parts.begin() + 1, event.parts.end(),
              [](const BlockRef& a, const BlockRef& b) { return a.least_label < b.least_label; });
    trace.push(std::move(event));
  }
  return trace;
}

auto bs_rate(int b, int k) -> ExactRational {
  if (k < 2 || k > b) throw DomainError("bs_rate needs 2 <= k <= b");
  const mpz_class num = factorial(static_cast<unsigned>(k - 2)) * factorial(static_cast<unsigned>(b - k));
  return ExactRational(num, factorial(static_cast<unsigned>(b - 1)));
}

auto merger_size_probabilities(int b) -> std::vector<double> {
  if (b < 2) throw DomainError("merger_size_probabilities needs b >= 2");
  std::vector<ExactRational> weights(static_cast<std::size_t>(b) + 1);
  ExactRational total;
  for (int k = 2; k <= b; ++k) {
    mpz_class choose;
    mpz_bin_uiui(choose.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(k));
    weights[k] = ExactRational(choose, 1) * bs_rate(b, k);
    total += weights[k];
  }
  std::vector<double> probs(static_cast<std::size_t>(b) + 1, 0.0);
  for (int k = 2; k <= b; ++k) probs[k] = (weights[k] / total).to_double();
  return probs;
}

namespace {

auto cached_merger_probabilities(int b) -> const std::vector<double>& {
  thread_local std::vector<std::vector<double>> cache;
  if (cache.size() <= static_cast<std::size_t>(b)) cache.resize(static_cast<std::size_t>(b) + 1);
  if (cache[b].empty()) cache[b] = merger_size_probabilities(b);
  return cache[b];
}

}  // namespace

auto simulate_bs_direct(int n, RngStream& rng, const Limits& limits) -> JumpChainTrace {
  if (n < 2) throw DomainError("simulate_bs_direct: n must be >= 2");
  if (n > limits.direct) throw SizeError("direct", limits.direct, n);

  std::vector<BlockRef> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v) blocks.push_back({v, 1});
  JumpChainTrace trace(n);

  while (blocks.size() > 1) {
    const int b = static_cast<int>(blocks.size());
    const auto& probs = cached_merger_probabilities(b);
    const double u = rng.uniform();
    int k = b;
    double cumulative = 0.0;
    for (int candidate = 2; candidate < b; ++candidate) {
      cumulative += probs[candidate];
      if (u < cumulative) {
        k = candidate;
        break;
      }
    }
    // Partial Fisher-Yates: the first k slots become a uniform k-subset.
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(b - i)));
      std::swap(blocks[i], blocks[j]);
    }
    MergeEvent event;
    event.parts.assign(blocks.begin(), blocks.begin() + k);
    std::sort(event.parts.begin(), event.parts.end(),
              [](const BlockRef& a, const BlockRef& c) { return a.least_label < c.least_label; });
    const BlockRef merged{event.parts.front().least_label, event.merged_size()};
    blocks.erase(blocks.begin(), blocks.begin() + k);
    blocks.push_back(merged);
    trace.push(std::move(event));
  }
  return trace;
}

auto extract_minimal_clade(const JumpChainTrace& trace) -> int {
  for (const auto& event : trace.events()) {
    if (event.involves_one()) return event.merged_size();
  }
  throw DomainError("trace never merges the block of 1");
}

auto extract_last_collision_mass(const JumpChainTrace& trace) -> int {
  if (trace.events().empty() || !trace.events().back().involves_one()) {
    throw DomainError("trace does not end with a merger of the block of 1");
  }
  return trace.n() - trace.events().back().parts.front().size;
}

auto extract_s_process(const JumpChainTrace& trace) -> CladeRecord {
  CladeRecord record;
  record.n = trace.n();
  record.s_sizes.push_back(1);
  for (const auto& event : trace.events()) {
    if (event.involves_one()) record.s_sizes.push_back(event.merged_size());
  }
  record.kappa_n = static_cast<int>(record.s_sizes.size()) - 1;
  if (record.kappa_n < 1) throw DomainError("trace never merges the block of 1");
  record.x_n = record.s_sizes[1];
  record.m_n = record.n - record.s_sizes[record.kappa_n - 1];
  return record;
}

auto sample_clade_record_cut(int n, RngStream& rng) -> CladeRecord {
  const auto tree = sample_recursive_tree(n, rng);
  return extract_s_process(cut_jump_chain(tree, rng));
}

auto partition_code(const Partition& partition, int n) -> std::int64_t {
  if (n < 1 || n > 15) throw DomainError("partition_code: n must be in [1, 15]");
  std::vector<int> block_of(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t b = 0; b < partition.size(); ++b) {
    for (int label : partition[b]) block_of[label] = static_cast<int>(b);
  }
  std::int64_t code = 0;
  for (int label = 1; label <= n; ++label) code = code * n + block_of[label];
  return code;
}

}  // namespace minclade
