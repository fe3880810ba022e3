#include "minclade/rational.hpp"

#include <stdexcept>

#include "minclade/errors.hpp"

namespace minclade {

ExactRational::ExactRational(long numerator, long denominator) : q_(numerator, denominator) {
  if (denominator == 0) throw DomainError("zero denominator");
  q_.canonicalize();
}

ExactRational::ExactRational(const mpz_class& numerator, const mpz_class& denominator)
    : q_(numerator, denominator) {
  if (sgn(denominator) == 0) throw DomainError("zero denominator");
  q_.canonicalize();
}

auto ExactRational::parse(std::string_view text) -> ExactRational {
  std::string s(text);
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: '" + s + "'");
  if (sgn(q.get_den()) == 0) throw DomainError("zero denominator: '" + s + "'");
  return ExactRational{q};
}

auto ExactRational::to_string() const -> std::string {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

auto ExactRational::operator/=(const ExactRational& o) -> ExactRational& {
  if (o.is_zero()) throw DomainError("division by zero");
  q_ /= o.q_;
  return *this;
}

auto factorial(unsigned n) -> mpz_class {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

}  // namespace minclade
