#include "iterlab/formal/rational.hpp"

#include <ostream>
#include <regex>

#include "iterlab/errors.hpp"

namespace iterlab::formal {

Rational::Rational(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  static const std::regex kRational(R"(^[+-]?\d+(/\d+)?$)");
  std::string s(text);
  if (!std::regex_match(s, kRational)) throw ParseError("malformed rational: '" + s + "'");
  if (s.front() == '+') s.erase(s.begin());
  mpq_class q;
  q.set_str(s, 10);
  if (q.get_den() == 0) throw DomainError("zero denominator in '" + s + "'");
  q.canonicalize();
  return Rational(q);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("rational division by zero");
  value_ /= o.value_;
  return *this;
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Real Rational::to_real(int digits) const {
  Real out(Real::Uninit{}, digits);
  mpfr_set_q(out.raw(), value_.get_mpq_t(), MPFR_RNDN);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.to_string(); }

}  // namespace iterlab::formal
