#pragma once

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <iosfwd>
#include <string>
#include <string_view>

namespace iterlab {

/// Arbitrary-precision real number backed by MPFR.
///
/// Precision is a property of each value, expressed in decimal digits.
/// Binary operations round to the larger precision of their operands, so
/// an integer literal mixed into a 120-digit computation never degrades it.
/// There is no global precision state.
class Real {
 public:
  static constexpr int kMinDigits = 10;

  Real() : Real(0L, kMinDigits) {}
  Real(long value, int digits = kMinDigits);  // NOLINT(google-explicit-constructor)
  Real(int value) : Real(static_cast<long>(value)) {}  // NOLINT

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  /// Parses `[-]d.ddd[E[+-]nn]`. Throws ParseError on malformed input.
  static Real from_decimal(std::string_view text, int digits);
  static Real pi(int digits);
  /// Exact power of ten rounded to the given precision.
  static Real pow10(long exponent, int digits);

  int digits() const noexcept { return digits_; }
  /// Same value rounded to a different precision.
  Real with_digits(int digits) const;

  /// Full round-trip rendering: `[-]d.ddd…dE±nn`.
  std::string to_string() const;
  /// Rendering rounded to `significant` digits, same layout.
  std::string to_string(int significant) const;
  double to_double() const;
  /// Nearest integer as a decimal string (exact).
  std::string round_to_integer_string() const;

  int sign() const noexcept;
  bool is_zero() const noexcept { return sign() == 0; }

  Real operator-() const;
  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  /// Throws DomainError when b is zero.
  friend Real operator/(const Real& a, const Real& b);

  friend bool operator==(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

  friend Real sqrt(const Real& x);
  friend Real log(const Real& x);
  friend Real exp(const Real& x);
  friend Real abs(const Real& x);
  friend Real pow(const Real& x, long n);
  friend Real round(const Real& x);

  mpfr_srcptr raw() const noexcept { return value_; }
  mpfr_ptr raw() noexcept { return value_; }

  /// Uninitialised-value constructor for the implementation; sets precision only.
  struct Uninit {};
  Real(Uninit, int digits);

 private:
  mpfr_t value_;
  int digits_;
};

/// Bits of binary precision used for a given decimal precision.
mpfr_prec_t digits_to_bits(int digits);

std::ostream& operator<<(std::ostream& os, const Real& x);

/// Compare against a tolerance in absolute terms.
bool near(const Real& a, const Real& b, const Real& tol);

}  // namespace iterlab
