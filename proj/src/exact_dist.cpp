#include "minclade/exact_dist.hpp"

#include <cmath>
#include <string>

#include "minclade/errors.hpp"

namespace minclade {
namespace {

void require_cap(const char* name, int cap, int requested) {
  if (requested > cap) throw SizeError(name, cap, requested);
}

// One step of f(l, m) = (1 - 1/l) f(l-1, m) + (1/l) f(l-1, m+1), written so
// that the serial and parallel builds evaluate the identical expression.
inline auto inv_shift_step(double l, double here, double next) -> double { return ((l - 1.0) * here + next) / l; }

inline auto inv_shift_step(const ExactRational& l, const ExactRational& here, const ExactRational& next)
    -> ExactRational {
  return ((l - ExactRational(1)) * here + next) / l;
}

template <typename P>
auto reciprocal(int m) -> P {
  if constexpr (std::is_same_v<P, double>) {
    return 1.0 / m;
  } else {
    return ExactRational(1, m);
  }
}

template <typename P>
constexpr auto recursion_cap(const Limits& limits) -> int {
  return std::is_same_v<P, double> ? limits.recursion_float : limits.recursion_exact;
}

template <typename P>
constexpr auto recursion_cap_name() -> const char* {
  return std::is_same_v<P, double> ? "recursion_float" : "recursion_exact";
}

}  // namespace

StirlingTriangle::StirlingTriangle(int n_max) : n_max_(n_max), rows_(static_cast<std::size_t>(n_max) + 1) {
  if (n_max < 1) throw DomainError("Stirling table needs n_max >= 1");
  rows_[1] = {0, 1};
  for (int m = 2; m <= n_max; ++m) {
    auto& row = rows_[m];
    const auto& prev = rows_[m - 1];
    row.assign(static_cast<std::size_t>(m) + 1, 0);
    for (int k = 1; k <= m; ++k) {
      if (k - 1 >= 1) row[k] = prev[k - 1];
      if (k <= m - 1) row[k] += (m - 1) * prev[k];
    }
  }
}

auto StirlingTriangle::at(int m, int k) const -> const mpz_class& {
  if (m < 1 || m > n_max_ || k < 1 || k > m) return zero_;
  return rows_[m][k];
}

auto stirling_first_table(int n_max, const Limits& limits) -> StirlingTriangle {
  if (n_max < 1) throw DomainError("stirling_first_table: n_max must be >= 1");
  require_cap("stirling", limits.stirling, n_max);
  return StirlingTriangle(n_max);
}

auto k_tables_pmf(int n, const Limits& limits) -> ExactPmf {
  if (n < 1) throw DomainError("k_tables_pmf: n must be >= 1 (K_0 = 0 is not a law here)");
  auto table = stirling_first_table(n, limits);
  const mpz_class n_fact = factorial(static_cast<unsigned>(n));
  ExactPmf pmf{1, {}, {LawKind::TableCount, n}};
  pmf.probs.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) pmf.probs.emplace_back(table.at(n, k), n_fact);
  return pmf;
}

template <typename P>
auto InvShiftTable<P>::at(int l, int m) const -> const P& {
  if (rows.empty()) throw std::logic_error("InvShiftTable: full rows were not stored");
  if (l < 0 || l > n_max || m < 1 || m > n_max + 1 - l) throw std::out_of_range("InvShiftTable: index out of range");
  return rows[l][m - 1];
}

template <typename P>
auto expected_inv_shifted(int n_max, InvShiftStorage storage) -> InvShiftTable<P> {
  if (n_max < 0) throw DomainError("expected_inv_shifted: n_max must be >= 0");
  InvShiftTable<P> table;
  table.n_max = n_max;
  table.first_column.reserve(static_cast<std::size_t>(n_max) + 1);

  // f[m - 1] holds f(l, m) for the current row l.
  std::vector<P> f;
  f.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int m = 1; m <= n_max + 1; ++m) f.push_back(reciprocal<P>(m));

  const bool full = storage == InvShiftStorage::Full;
  if (full) table.rows.push_back(f);
  table.first_column.push_back(f[0]);

  for (int l = 1; l <= n_max; ++l) {
    const P l_value(l);
    const int width = n_max + 1 - l;
    // Ascending m reads f(l-1, m+1) before it is overwritten.
    for (int m = 0; m < width; ++m) f[m] = inv_shift_step(l_value, f[m], f[m + 1]);
    f.pop_back();
    if (full) table.rows.push_back(f);
    table.first_column.push_back(f[0]);
  }
  return table;
}

auto expected_inv_shifted_parallel(int n_max) -> std::vector<double> {
  if (n_max < 0) throw DomainError("expected_inv_shifted: n_max must be >= 0");
  std::vector<double> column(static_cast<std::size_t>(n_max) + 1);
  std::vector<double> cur(static_cast<std::size_t>(n_max) + 1);
  std::vector<double> next(static_cast<std::size_t>(n_max) + 1);
  for (int m = 1; m <= n_max + 1; ++m) cur[m - 1] = 1.0 / m;
  column[0] = cur[0];

#pragma omp parallel
  {
    for (int l = 1; l <= n_max; ++l) {
      const double l_value = l;
      const int width = n_max + 1 - l;
#pragma omp for schedule(static)
      for (int m = 0; m < width; ++m) next[m] = inv_shift_step(l_value, cur[m], cur[m + 1]);
#pragma omp single
      {
        cur.swap(next);
        column[l] = cur[0];
      }
    }
  }
  return column;
}

template <typename P>
auto mincl_pmf_recursion(int n, const Limits& limits) -> Pmf<P> {
  if (n < 2) throw DomainError("X_n is defined for n >= 2");
  require_cap(recursion_cap_name<P>(), recursion_cap<P>(limits), n);
  const auto table = expected_inv_shifted<P>(n - 2);
  Pmf<P> pmf{2, {}, {LawKind::MinimalClade, n}};
  pmf.probs.reserve(static_cast<std::size_t>(n) - 1);
  for (int j = 1; j <= n - 1; ++j) pmf.probs.push_back(table.first_column[n - 1 - j] / P(j));
  return pmf;
}

namespace {

// Walks the integer partitions of `total` in multiplicity form, choosing the
// multiplicity of the largest part first.
class PartitionSweep {
 public:
  explicit PartitionSweep(int total)
      : total_(total), mult_(static_cast<std::size_t>(total) + 1, 0),
        by_tables_(static_cast<std::size_t>(total) + 1,
                   std::vector<mpz_class>(static_cast<std::size_t>(total) + 1, 0)),
        total_fact_(factorial(static_cast<unsigned>(total))) {}

  void run() { descend(total_, total_, mpz_class(1), 0); }

  // sum over partitions with K tables of N! / prod(a_i! i^a_i) * a_j, indexed [j][K].
  auto by_tables() const -> const std::vector<std::vector<mpz_class>>& { return by_tables_; }

 private:
  void descend(int part, int remaining, const mpz_class& weight_den, int tables) {
    if (remaining == 0) {
      record(weight_den, tables);
      return;
    }
    if (part == 1) {
      mult_[1] = remaining;
      record(weight_den * factorial(static_cast<unsigned>(remaining)), tables + remaining);
      mult_[1] = 0;
      return;
    }
    mpz_class den = weight_den;
    mpz_class power = 1;
    for (int a = 0; a * part <= remaining; ++a) {
      if (a > 0) {
        power *= part;
        den = weight_den * factorial(static_cast<unsigned>(a)) * power;
      }
      mult_[part] = a;
      descend(part - 1, remaining - a * part, den, tables + a);
    }
    mult_[part] = 0;
  }

  void record(const mpz_class& weight_den, int tables) {
    // prod(a_i! i^a_i) divides N!; the quotient counts permutations of this cycle type.
    const mpz_class count = total_fact_ / weight_den;
    for (int j = 1; j <= total_; ++j) {
      if (mult_[j] != 0) by_tables_[j][tables] += count * mult_[j];
    }
  }

  int total_;
  std::vector<int> mult_;
  std::vector<std::vector<mpz_class>> by_tables_;
  mpz_class total_fact_;
};

}  // namespace

auto mincl_pmf_partitions(int n, const Limits& limits) -> ExactPmf {
  if (n < 2) throw DomainError("X_n is defined for n >= 2");
  require_cap("partitions", limits.partitions, n);
  const int total = n - 1;
  PartitionSweep sweep(total);
  sweep.run();
  const mpz_class total_fact = factorial(static_cast<unsigned>(total));

  ExactPmf pmf{2, {}, {LawKind::MinimalClade, n}};
  pmf.probs.reserve(static_cast<std::size_t>(total));
  for (int j = 1; j <= total; ++j) {
    ExactRational p;
    const auto& row = sweep.by_tables()[j];
    for (int tables = 1; tables <= total; ++tables) {
      if (sgn(row[tables]) != 0) p += ExactRational(row[tables], total_fact * tables);
    }
    pmf.probs.push_back(std::move(p));
  }
  return pmf;
}

auto composition_sums(int m_max) -> std::vector<std::vector<ExactRational>> {
  const auto size = static_cast<std::size_t>(std::max(m_max, 0)) + 1;
  std::vector<std::vector<ExactRational>> c(size, std::vector<ExactRational>(size));
  for (int m = 1; m <= m_max; ++m) c[1][m] = ExactRational(1, m);
  for (int k = 2; k <= m_max; ++k) {
    for (int m = k; m <= m_max; ++m) {
      ExactRational sum;
      for (int v = 1; v <= m - k + 1; ++v) sum += ExactRational(1, v) * c[k - 1][m - v];
      c[k][m] = std::move(sum);
    }
  }
  return c;
}

auto mincl_pmf_compositions(int n, const Limits& limits) -> ExactPmf {
  if (n < 2) throw DomainError("X_n is defined for n >= 2");
  require_cap("compositions", limits.compositions, n);
  const auto c = composition_sums(n - 2);

  ExactPmf pmf{2, {}, {LawKind::MinimalClade, n}};
  pmf.probs.reserve(static_cast<std::size_t>(n) - 1);
  for (int j = 1; j < n - 1; ++j) {
    const int m = n - 1 - j;
    ExactRational inner;
    for (int k = 1; k <= m; ++k) inner += c[k][m] / ExactRational(factorial(static_cast<unsigned>(k + 1)), 1);
    pmf.probs.push_back(inner / ExactRational(j));
  }
  pmf.probs.emplace_back(1, n - 1);
  return pmf;
}

template <typename P>
auto rt_pmf(int n, const Limits& limits) -> Pmf<P> {
  if (n < 1) throw DomainError("RT_n is defined for n >= 1");
  return shifted(mincl_pmf_recursion<P>(n + 1, limits), -1, {LawKind::UniformTableSize, n});
}

auto moment_of(const ExactPmf& pmf, int k) -> ExactRational {
  if (k < 1) throw DomainError("moment order must be >= 1");
  ExactRational sum;
  for (int v = pmf.min_support; v <= pmf.max_support(); ++v) {
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(v), static_cast<unsigned long>(k));
    sum += ExactRational(power, 1) * pmf.at(v);
  }
  return sum;
}

auto moment_of(const FloatPmf& pmf, int k) -> double {
  if (k < 1) throw DomainError("moment order must be >= 1");
  CompensatedSum sum;
  for (int v = pmf.min_support; v <= pmf.max_support(); ++v) sum.add(std::pow(double(v), k) * pmf.at(v));
  const double value = sum.value();
  if (!std::isfinite(value)) {
    throw OverflowError("E(X^" + std::to_string(k) + ") overflows double precision for n = " +
                        std::to_string(pmf.max_support()));
  }
  return value;
}

template <typename P>
auto moment(int n, int k, const Limits& limits) -> P {
  if (k < 1) throw DomainError("moment order must be >= 1");
  return moment_of(mincl_pmf_recursion<P>(n, limits), k);
}

auto scaled_moment_of(const FloatPmf& pmf, int k) -> double {
  if (k < 1) throw DomainError("moment order must be >= 1");
  const int n = pmf.max_support();
  // (log n / n^k) sum v^k p(v) = log n * sum (v/n)^k p(v); stays finite for any k.
  CompensatedSum sum;
  for (int v = pmf.min_support; v <= n; ++v) sum.add(std::pow(double(v) / n, k) * pmf.at(v));
  return std::log(double(n)) * sum.value();
}

auto scaled_moment(int n, int k, const Limits& limits) -> double {
  if (n < 3) throw DomainError("scaled_moment needs n >= 3");
  return scaled_moment_of(mincl_pmf_recursion<double>(n, limits), k);
}

template struct InvShiftTable<ExactRational>;
template struct InvShiftTable<double>;
template auto expected_inv_shifted<ExactRational>(int, InvShiftStorage) -> InvShiftTable<ExactRational>;
template auto expected_inv_shifted<double>(int, InvShiftStorage) -> InvShiftTable<double>;
template auto mincl_pmf_recursion<ExactRational>(int, const Limits&) -> ExactPmf;
template auto mincl_pmf_recursion<double>(int, const Limits&) -> FloatPmf;
template auto rt_pmf<ExactRational>(int, const Limits&) -> ExactPmf;
template auto rt_pmf<double>(int, const Limits&) -> FloatPmf;
template auto moment<ExactRational>(int, int, const Limits&) -> ExactRational;
template auto moment<double>(int, int, const Limits&) -> double;

}  // namespace minclade
