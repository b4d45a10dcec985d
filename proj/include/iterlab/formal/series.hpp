#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iterlab/errors.hpp"
#include "iterlab/formal/ring.hpp"

namespace iterlab::formal {

/// Truncated formal series in one variable t:
///
///   principal / t  +  log_coefficient * log t  +  sum_{j=0..order} c_j t^j  +  O(t^(order+1))
///
/// The principal part and the log slot are optional and participate
/// linearly in addition. The truncation order travels with the value.
template <CoefficientRing R>
class Series {
 public:
  Series(std::string variable, int order, std::vector<R> coeffs = {})
      : variable_(std::move(variable)), order_(order), coeffs_(std::move(coeffs)) {
    if (order_ < 0) throw UsageError("series order must be nonnegative");
    coeffs_.resize(static_cast<size_t>(order_) + 1, R(0));
  }

  static Series constant(std::string variable, int order, R value) {
    return Series(std::move(variable), order, {std::move(value)});
  }

  /// value * t^power truncated at `order`.
  static Series monomial(std::string variable, int order, R value, int power) {
    Series out(std::move(variable), order);
    if (power <= order) out.coeffs_[static_cast<size_t>(power)] = std::move(value);
    return out;
  }

  const std::string& variable() const noexcept { return variable_; }
  int order() const noexcept { return order_; }
  const std::vector<R>& coefficients() const noexcept { return coeffs_; }
  const R& coefficient(int j) const { return coeffs_.at(static_cast<size_t>(j)); }
  void set_coefficient(int j, R value) { coeffs_.at(static_cast<size_t>(j)) = std::move(value); }

  const std::optional<R>& principal() const noexcept { return principal_; }
  const std::optional<R>& log_coefficient() const noexcept { return log_; }

  Series with_principal(R value) const {
    Series out = *this;
    out.principal_ = std::move(value);
    return out;
  }
  Series with_log(R value) const {
    Series out = *this;
    out.log_ = std::move(value);
    return out;
  }
  /// Same series with the principal part and log slot removed.
  Series regular_part() const { return Series(variable_, order_, coeffs_); }

  bool is_regular() const noexcept { return !principal_ && !log_; }

  Series truncated(int order) const {
    Series out = *this;
    out.order_ = std::min(order, order_);
    out.coeffs_.resize(static_cast<size_t>(out.order_) + 1);
    return out;
  }

  Series operator-() const {
    Series out = *this;
    for (auto& c : out.coeffs_) c = -c;
    if (out.principal_) out.principal_ = -*out.principal_;
    if (out.log_) out.log_ = -*out.log_;
    return out;
  }

  friend Series operator+(const Series& a, const Series& b) {
    check_variable(a, b);
    Series out(a.variable_, std::min(a.order_, b.order_));
    for (int j = 0; j <= out.order_; ++j) out.coeffs_[j] = a.coeffs_[j] + b.coeffs_[j];
    out.principal_ = add_optional(a.principal_, b.principal_);
    out.log_ = add_optional(a.log_, b.log_);
    return out;
  }

  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

  /// Cauchy product truncated at the smaller order. A principal part on one
  /// side costs one order of the other side. Log slots multiply only by
  /// constant series.
  friend Series operator*(const Series& a, const Series& b) {
    check_variable(a, b);
    if (a.log_ && b.log_) throw UsageError("product of two log-augmented series is not supported");
    if (a.principal_ && b.principal_) throw UsageError("product of two principal parts is not supported");
    if ((a.log_ && !b.is_constant()) || (b.log_ && !a.is_constant())) {
      throw UsageError("log slot may only be scaled by a constant series");
    }
    if (b.principal_) return b * a;

    int order = std::min(a.order_, b.order_);
    if (a.principal_) order = std::min(a.order_, b.order_ - 1);
    if (order < 0) throw UsageError("product order would be negative");
    Series out(a.variable_, order);
    for (int n = 0; n <= order; ++n) {
      R acc(0);
      for (int j = 0; j <= n; ++j) {
        if (RingTraits<R>::is_zero(a.coeffs_[j])) continue;
        acc = acc + a.coeffs_[j] * b.coeffs_[n - j];
      }
      if (a.principal_) acc = acc + *a.principal_ * b.coeffs_[n + 1];
      out.coeffs_[n] = std::move(acc);
    }
    if (a.principal_) out.principal_ = *a.principal_ * b.coeffs_[0];
    if (a.log_) out.log_ = *a.log_ * b.coeffs_[0];
    if (b.log_) out.log_ = *b.log_ * a.coeffs_[0];
    return out;
  }

  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  /// Multiplies every component by a ring element.
  Series scaled(const R& factor) const {
    Series out = *this;
    for (auto& c : out.coeffs_) c = c * factor;
    if (out.principal_) out.principal_ = *out.principal_ * factor;
    if (out.log_) out.log_ = *out.log_ * factor;
    return out;
  }

  /// t^(-1) * (this - c_0), i.e. the series divided by its variable.
  /// Requires a zero constant term; loses one order.
  Series divided_by_variable() const {
    require_regular("divided_by_variable");
    if (!RingTraits<R>::is_zero(coeffs_[0])) throw DomainError("constant term must vanish");
    if (order_ < 1) throw UsageError("order too small to divide by the variable");
    return Series(variable_, order_ - 1, std::vector<R>(coeffs_.begin() + 1, coeffs_.end()));
  }

  /// Multiplicative inverse; the constant term must be a unit.
  Series reciprocal() const {
    require_regular("reciprocal");
    if (!RingTraits<R>::is_unit(coeffs_[0])) throw DomainError("reciprocal needs a unit constant term");
    const R inv0 = RingTraits<R>::inverse(coeffs_[0]);
    Series out(variable_, order_);
    out.coeffs_[0] = inv0;
    for (int n = 1; n <= order_; ++n) {
      R acc(0);
      for (int j = 1; j <= n; ++j) {
        if (RingTraits<R>::is_zero(coeffs_[j])) continue;
        acc = acc + coeffs_[j] * out.coeffs_[n - j];
      }
      out.coeffs_[n] = -(acc * inv0);
    }
    return out;
  }

  /// log of a series with constant term 1, as a regular series with zero
  /// constant term (integral of s'/s).
  Series log_series() const {
    require_regular("log_series");
    if (!(coeffs_[0] == R(1))) throw DomainError("log_series needs constant term 1");
    Series derivative(variable_, std::max(order_ - 1, 0));
    for (int j = 1; j <= order_; ++j) derivative.coeffs_[j - 1] = coeffs_[j] * R(j);
    const Series quotient = derivative * reciprocal().truncated(derivative.order_);
    Series out(variable_, order_);
    for (int j = 1; j <= order_; ++j) out.coeffs_[j] = divide_by_integer(quotient.coeffs_[j - 1], j);
    return out;
  }

  /// Positive integer power, truncated at the current order.
  Series pow(int exponent) const {
    if (exponent < 0) throw UsageError("use reciprocal() for negative powers");
    Series out = constant(variable_, order_, R(1));
    Series base = *this;
    while (exponent > 0) {
      if (exponent & 1) out = out * base;
      exponent >>= 1;
      if (exponent > 0) base = base * base;
    }
    return out;
  }

  /// Substitutes t -> inner(t). `inner` must be regular with zero constant
  /// term. A principal part maps through 1/inner (linear coefficient must be
  /// a unit); a log slot maps through log inner = log t + log(inner/t)
  /// (linear coefficient must be 1).
  Series compose_inner(const Series& inner) const {
    check_variable(*this, inner);
    inner.require_regular("compose_inner (inner)");
    if (!RingTraits<R>::is_zero(inner.coeffs_[0])) throw DomainError("inner series must have zero constant term");

    int order = std::min(order_, inner.order_);
    if (principal_) order = std::min(order, inner.order_ - 2);
    if (log_) order = std::min(order, inner.order_ - 1);
    if (order < 0) throw UsageError("inner series order too small for composition");

    const Series in = inner.truncated(order);
    Series out = constant(variable_, order, coeffs_[static_cast<size_t>(order)]);
    for (int j = order - 1; j >= 0; --j) {
      out = out * in;
      out.coeffs_[0] = out.coeffs_[0] + coeffs_[j];
    }

    if (principal_ || log_) {
      const Series scaled_inner = inner.divided_by_variable();
      if (principal_) {
        const Series recip = scaled_inner.reciprocal();
        Series part(variable_, order);
        for (int j = 0; j <= order; ++j) part.coeffs_[j] = *principal_ * recip.coeffs_[j + 1];
        part.principal_ = *principal_ * recip.coeffs_[0];
        out = out + part;
      }
      if (log_) {
        if (!(scaled_inner.coeffs_[0] == R(1))) {
          throw DomainError("log composition needs inner with unit linear coefficient 1");
        }
        Series part = scaled_inner.log_series().truncated(order).scaled(*log_);
        part.log_ = *log_;
        out = out + part;
      }
    }
    return out;
  }

  friend bool operator==(const Series& a, const Series& b) {
    return a.variable_ == b.variable_ && a.order_ == b.order_ && a.coeffs_ == b.coeffs_ &&
           a.principal_ == b.principal_ && a.log_ == b.log_;
  }

 private:
  bool is_constant() const {
    if (principal_) return false;
    for (size_t j = 1; j < coeffs_.size(); ++j) {
      if (!RingTraits<R>::is_zero(coeffs_[j])) return false;
    }
    return true;
  }

  void require_regular(const char* what) const {
    if (!is_regular()) throw UsageError(std::string(what) + " requires a regular series");
  }

  static void check_variable(const Series& a, const Series& b) {
    if (a.variable_ != b.variable_) {
      throw UsageError("series variable mismatch: " + a.variable_ + " vs " + b.variable_);
    }
  }

  static std::optional<R> add_optional(const std::optional<R>& x, const std::optional<R>& y) {
    if (x && y) return *x + *y;
    if (x) return x;
    return y;
  }

  std::string variable_;
  int order_;
  std::vector<R> coeffs_;
  std::optional<R> principal_;
  std::optional<R> log_;
};

/// Coefficients of (1 + t)^(-k) through t^order: c_j = (-1)^j binom(k+j-1, j).
template <CoefficientRing R>
Series<R> binomial_expand(int k, int order, std::string variable = "t") {
  if (k < 1) throw DomainError("binomial_expand needs k >= 1");
  Series<R> out(std::move(variable), order);
  R c(1);
  out.set_coefficient(0, c);
  for (int j = 1; j <= order; ++j) {
    // c_j = -c_{j-1} * (k + j - 1) / j
    c = divide_by_integer(-(c * R(k + j - 1)), j);
    out.set_coefficient(j, c);
  }
  return out;
}

}  // namespace iterlab::formal
