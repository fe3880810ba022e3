#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace minclade {

// Arbitrary-precision rational kept in canonical form (positive denominator,
// reduced) after every operation.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long value) : q_(value) {}  // NOLINT: implicit by design of numeric literals
  ExactRational(int value) : q_(static_cast<long>(value)) {}
  ExactRational(long numerator, long denominator);
  ExactRational(const mpz_class& numerator, const mpz_class& denominator);
  explicit ExactRational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  // Accepts "p/q" or a bare integer "p".
  static auto parse(std::string_view text) -> ExactRational;

  auto numerator() const -> mpz_class { return q_.get_num(); }
  auto denominator() const -> mpz_class { return q_.get_den(); }
  auto raw() const -> const mpq_class& { return q_; }

  auto to_double() const -> double { return q_.get_d(); }
  // Always "numerator/denominator", including integers ("1/1").
  auto to_string() const -> std::string;

  auto is_zero() const -> bool { return sgn(q_) == 0; }

  auto operator+=(const ExactRational& o) -> ExactRational& { q_ += o.q_; return *this; }
  auto operator-=(const ExactRational& o) -> ExactRational& { q_ -= o.q_; return *this; }
  auto operator*=(const ExactRational& o) -> ExactRational& { q_ *= o.q_; return *this; }
  auto operator/=(const ExactRational& o) -> ExactRational&;

  friend auto operator+(ExactRational a, const ExactRational& b) -> ExactRational { return a += b; }
  friend auto operator-(ExactRational a, const ExactRational& b) -> ExactRational { return a -= b; }
  friend auto operator*(ExactRational a, const ExactRational& b) -> ExactRational { return a *= b; }
  friend auto operator/(ExactRational a, const ExactRational& b) -> ExactRational { return a /= b; }
  friend auto operator-(const ExactRational& a) -> ExactRational { return ExactRational{mpq_class(-a.q_)}; }

  friend auto operator==(const ExactRational& a, const ExactRational& b) -> bool { return a.q_ == b.q_; }
  friend auto operator<=>(const ExactRational& a, const ExactRational& b) -> std::strong_ordering {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend auto operator<<(std::ostream& os, const ExactRational& r) -> std::ostream& { return os << r.to_string(); }

 private:
  mpq_class q_{0};
};

auto factorial(unsigned n) -> mpz_class;

// Uniform conversion for code templated over ExactRational and double.
inline auto to_double(const ExactRational& r) -> double { return r.to_double(); }
inline auto to_double(double d) -> double { return d; }

}  // namespace minclade
