#include "minclade/crp_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "minclade/errors.hpp"

namespace minclade {

auto CrpTables::is_valid() const -> bool {
  if (n < 0 || sizes.empty() != (n == 0)) return false;
  if (std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 1; })) return false;
  if (std::accumulate(sizes.begin(), sizes.end(), 0L) != n) return false;
  if (!labels) return true;
  if (labels->size() != sizes.size()) return false;
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    if (static_cast<int>((*labels)[t].size()) != sizes[t]) return false;
    for (int label : (*labels)[t]) {
      if (label < 1 || label > n || seen[label]) return false;
      seen[label] = 1;
    }
  }
  return true;
}

auto sample_crp(int n, RngStream& rng, CrpMode mode) -> CrpTables {
  if (n < 1) throw DomainError("sample_crp: n must be >= 1");
  CrpTables tables;
  tables.n = n;
  tables.sizes.push_back(1);

  if (mode == CrpMode::Full) {
    std::vector<int> table_of(static_cast<std::size_t>(n) + 1, 0);  // customer -> table index
    std::vector<std::vector<int>> labels{{1}};
    for (int i = 2; i <= n; ++i) {
      // i places: next to one of the i - 1 seated customers, or a new table.
      const auto place = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
      if (place == i - 1) {
        table_of[i] = static_cast<int>(labels.size());
        labels.push_back({i});
        tables.sizes.push_back(1);
      } else {
        const int t = table_of[place + 1];
        table_of[i] = t;
        labels[t].push_back(i);
        ++tables.sizes[t];
      }
    }
    tables.labels = std::move(labels);
    return tables;
  }

  // Feller coupling. With independent Bernoulli(1/i) trials for i = 1..n and
  // a success planted at n + 1, the gaps between successes read from the
  // right have the law of the table sizes in creation order. After a success
  // at j the next one lies beyond k with probability j/k, so the successes
  // are visited directly and the cost is O(K_n) draws.
  std::vector<std::int64_t> successes{1};
  std::int64_t last = 1;
  for (;;) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double next = std::max(std::ceil(static_cast<double>(last) / u), static_cast<double>(last + 1));
    if (next > static_cast<double>(n)) break;
    last = static_cast<std::int64_t>(next);
    successes.push_back(last);
  }
  tables.sizes.clear();
  std::int64_t right = static_cast<std::int64_t>(n) + 1;
  for (auto it = successes.rbegin(); it != successes.rend(); ++it) {
    tables.sizes.push_back(static_cast<int>(right - *it));
    right = *it;
  }
  return tables;
}

auto uniform_table_size(const CrpTables& tables, RngStream& rng) -> int {
  if (tables.sizes.empty()) throw DomainError("uniform_table_size: no occupied tables");
  return tables.sizes[rng.below(tables.sizes.size())];
}

auto sample_k_bernoulli(int n, RngStream& rng) -> int {
  if (n < 1) throw DomainError("sample_k_bernoulli: n must be >= 1");
  int count = 1;  // B_1 = 1
  for (int i = 2; i <= n; ++i) count += rng.below(static_cast<std::uint64_t>(i)) == 0 ? 1 : 0;
  return count;
}

auto sample_minimal_clade_fast(int n, RngStream& rng) -> int {
  if (n < 2) throw DomainError("X_n is defined for n >= 2");
  return uniform_table_size(sample_crp(n - 1, rng, CrpMode::CountsOnly), rng) + 1;
}

auto table_count_vector(const CrpTables& tables) -> std::vector<int> {
  std::vector<int> counts(static_cast<std::size_t>(tables.n) + 1, 0);
  for (int s : tables.sizes) ++counts[s];
  return counts;
}

}  // namespace minclade
