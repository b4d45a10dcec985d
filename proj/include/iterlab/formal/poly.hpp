#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "iterlab/errors.hpp"
#include "iterlab/formal/ring.hpp"

namespace iterlab::formal {

/// Dense univariate polynomial in a named symbol over a coefficient ring.
///
/// The highest stored coefficient is nonzero unless the polynomial is zero,
/// in which case no coefficients are stored. A constant polynomial may have
/// an empty symbol and then combines with a polynomial in any symbol.
template <CoefficientRing R>
class Poly {
 public:
  Poly() = default;
  Poly(int constant) : Poly(R(constant)) {}  // NOLINT(google-explicit-constructor)
  explicit Poly(R constant) {
    coeffs_.push_back(std::move(constant));
    normalize();
  }
  Poly(std::string symbol, std::vector<R> coeffs) : symbol_(std::move(symbol)), coeffs_(std::move(coeffs)) {
    normalize();
  }

  /// The polynomial `symbol`.
  static Poly variable(std::string symbol) { return Poly(std::move(symbol), {R(0), R(1)}); }

  const std::string& symbol() const noexcept { return symbol_; }
  const std::vector<R>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }

  R coefficient(int power) const {
    if (power < 0 || power >= static_cast<int>(coeffs_.size())) return R(0);
    return coeffs_[static_cast<size_t>(power)];
  }

  Poly operator-() const {
    Poly out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<R> out(std::max(a.coeffs_.size(), b.coeffs_.size()), R(0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i) out[i] = out[i] + a.coeffs_[i];
    for (size_t i = 0; i < b.coeffs_.size(); ++i) out[i] = out[i] + b.coeffs_[i];
    return Poly(merge_symbol(a, b), std::move(out));
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    const std::string symbol = merge_symbol(a, b);
    if (a.is_zero() || b.is_zero()) return Poly(symbol, {});
    std::vector<R> out(a.coeffs_.size() + b.coeffs_.size() - 1, R(0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (RingTraits<R>::is_zero(a.coeffs_[i])) continue;
      for (size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] = out[i + j] + a.coeffs_[i] * b.coeffs_[j];
    }
    return Poly(symbol, std::move(out));
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  /// Symbols are ignored when either side is constant.
  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) return false;
    if (a.degree() >= 1 && a.symbol_ != b.symbol_) return false;
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (!(a.coeffs_[i] == b.coeffs_[i])) return false;
    }
    return true;
  }

  Poly derivative() const {
    if (coeffs_.size() <= 1) return Poly(symbol_, {});
    std::vector<R> out;
    out.reserve(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) out.push_back(coeffs_[i] * R(static_cast<int>(i)));
    return Poly(symbol_, std::move(out));
  }

  /// Horner evaluation at x in any ring T; `lift` maps R coefficients into T.
  template <typename T, typename Lift>
  T evaluate(const T& x, Lift lift) const {
    if (coeffs_.empty()) return lift(R(0));
    T acc = lift(coeffs_.back());
    for (size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * x + lift(coeffs_[i]);
    return acc;
  }

  R evaluate(const R& x) const {
    return evaluate(x, [](const R& c) { return c; });
  }

  /// Plain-text rendering, e.g. "-5/6 + C - C^2".
  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    const std::string sym = symbol_.empty() ? "x" : symbol_;
    std::string out;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
      if (RingTraits<R>::is_zero(coeffs_[i])) continue;
      std::string c = RingTraits<R>::to_string(coeffs_[i]);
      bool negative = !c.empty() && c.front() == '-';
      if (negative) c.erase(c.begin());
      if (out.empty()) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      if (i == 0) {
        out += c;
        continue;
      }
      if (c != "1") out += c + "*";
      out += sym;
      if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  static std::string merge_symbol(const Poly& a, const Poly& b) {
    if (a.degree() >= 1 && b.degree() >= 1 && a.symbol_ != b.symbol_) {
      throw UsageError("polynomial symbol mismatch: " + a.symbol_ + " vs " + b.symbol_);
    }
    if (a.degree() >= 1) return a.symbol_;
    if (b.degree() >= 1) return b.symbol_;
    return a.symbol_.empty() ? b.symbol_ : a.symbol_;
  }

  void normalize() {
    while (!coeffs_.empty() && RingTraits<R>::is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  std::string symbol_;
  std::vector<R> coeffs_;
};

template <CoefficientRing R>
struct RingTraits<Poly<R>> {
  static constexpr bool is_exact = RingTraits<R>::is_exact;
  static bool is_zero(const Poly<R>& p) { return p.is_zero(); }
  static bool is_unit(const Poly<R>& p) {
    return p.degree() == 0 && RingTraits<R>::is_unit(p.coefficients().front());
  }
  static Poly<R> inverse(const Poly<R>& p) {
    return Poly<R>(p.symbol(), {ring_inverse(p.coefficients().front())});
  }
  static Poly<R> divide(const Poly<R>& p, long n) {
    std::vector<R> cs = p.coefficients();
    for (R& c : cs) c = RingTraits<R>::divide(c, n);
    return Poly<R>(p.symbol(), std::move(cs));
  }
  static std::string to_string(const Poly<R>& p) { return p.to_string(); }
};

}  // namespace iterlab::formal
