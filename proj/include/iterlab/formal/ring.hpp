#pragma once

#include <concepts>
#include <string>

#include "iterlab/errors.hpp"
#include "iterlab/formal/rational.hpp"
#include "iterlab/real.hpp"

namespace iterlab::formal {

/// Per-ring operations that are not expressible through operators.
/// Specialised below for Rational and Real, and in poly.hpp for Poly<R>.
template <typename R>
struct RingTraits;

template <>
struct RingTraits<Rational> {
  static constexpr bool is_exact = true;
  static bool is_zero(const Rational& x) { return x.is_zero(); }
  static bool is_unit(const Rational& x) { return !x.is_zero(); }
  static Rational inverse(const Rational& x) { return Rational(1) / x; }
  static Rational divide(const Rational& x, long n) { return x / Rational(n); }
  static std::string to_string(const Rational& x) { return x.to_string(); }
};

template <>
struct RingTraits<Real> {
  static constexpr bool is_exact = false;
  static bool is_zero(const Real& x) { return x.is_zero(); }
  static bool is_unit(const Real& x) { return !x.is_zero(); }
  static Real inverse(const Real& x) { return Real(1) / x; }
  static Real divide(const Real& x, long n) { return x / Real(n); }
  static std::string to_string(const Real& x) { return x.to_string(); }
};

/// Commutative ring with identity, constructible from small integers.
template <typename R>
concept CoefficientRing = std::constructible_from<R, int> && std::copyable<R> &&
    requires(const R& a, const R& b) {
      { a + b } -> std::convertible_to<R>;
      { a - b } -> std::convertible_to<R>;
      { a * b } -> std::convertible_to<R>;
      { -a } -> std::convertible_to<R>;
      { a == b } -> std::convertible_to<bool>;
      { RingTraits<R>::is_zero(a) } -> std::convertible_to<bool>;
      { RingTraits<R>::is_unit(a) } -> std::convertible_to<bool>;
      { RingTraits<R>::inverse(a) } -> std::convertible_to<R>;
      { RingTraits<R>::divide(a, 1L) } -> std::convertible_to<R>;
      { RingTraits<R>::to_string(a) } -> std::convertible_to<std::string>;
      { RingTraits<R>::is_exact } -> std::convertible_to<bool>;
    };

template <CoefficientRing R>
R ring_inverse(const R& x) {
  if (!RingTraits<R>::is_unit(x)) throw DomainError("element is not a unit of the coefficient ring");
  return RingTraits<R>::inverse(x);
}

/// x / n for a nonzero integer n.
template <CoefficientRing R>
R divide_by_integer(const R& x, long n) {
  if (n == 0) throw DomainError("division by zero");
  return RingTraits<R>::divide(x, n);
}

}  // namespace iterlab::formal
