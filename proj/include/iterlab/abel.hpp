#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iterlab/errors.hpp"
#include "iterlab/formal/poly.hpp"
#include "iterlab/formal/series.hpp"
#include "iterlab/real.hpp"

/// Principal Abel function of f_a(x) = x - a x^2 + x^3 on (0, a), 1 <= a <= 2.
namespace iterlab::abel {

/// Raised when an orbit lands on the fixed point 0 or, for a = 2, on the
/// preimage chain of 1 where F_2 has vertical asymptotes.
class AsymptoteHit : public DomainError {
 public:
  using DomainError::DomainError;
};

class CubicFamily {
 public:
  /// Throws DomainError unless 1 <= a <= 2.
  CubicFamily(Real a, int digits);

  const Real& a() const noexcept { return a_; }
  int digits() const noexcept { return digits_; }

  Real map(const Real& x) const;         ///< f_a(x)
  Real derivative(const Real& x) const;  ///< 1 - 2 a x + 3 x^2
  /// Whether a = 2 to working precision (the map then sends 1 to 0).
  bool has_asymptotes() const noexcept { return asymptotic_; }
  /// Whether a = sqrt(3) to working precision (double critical point).
  bool is_degenerate() const noexcept { return degenerate_; }
  /// Preimages 1 = eta_0 < eta_1 < ... of 1 on the increasing branch when
  /// has_asymptotes(); empty otherwise.
  const std::vector<Real>& asymptote_chain() const noexcept { return asymptote_chain_; }

 private:
  Real a_;
  int digits_;
  bool asymptotic_ = false;
  bool degenerate_ = false;
  std::vector<Real> asymptote_chain_;
};

/// Zeros xi_0 <= eta_0 of 3x^2 - 2 a x + 1. Throws DomainError for a < sqrt(3).
std::pair<Real, Real> critical_pair(const Real& a);

/// Choice of the additive constant in the Abel function.
enum class Normalization {
  /// Zero constant term in the variable w = a y, where f_a(y) becomes
  /// w - w^2 + w^3/a^2: the y^0 coefficient is c log a.
  Scaled,
  /// Zero y^0 coefficient in y itself.
  ZeroConstant,
};

/// Asymptotic Abel function near 0:
///   A(y) = principal / y + constant + log_coefficient * log y + sum_{j=1..K} d_j(L) y^j,  L = log y
struct AbelSeries {
  Real a;
  int order = 0;
  Normalization normalization = Normalization::Scaled;
  Real principal;        ///< 1/a
  Real constant;         ///< y^0 coefficient fixed by the normalization
  Real log_coefficient;  ///< (a^2 - 1)/a^2
  std::vector<formal::Poly<Real>> regular;  ///< d_1..d_K as polynomials in L
  int max_log_degree = 0;                   ///< highest L-degree among the d_j
  Real symbolic_residual;  ///< max |coefficient| of A(f(y)) - A(y) - 1 through y^(K+1)

  Real evaluate(const Real& y) const;
  /// |A(f_a(y)) - A(y) - 1| evaluated numerically.
  Real numeric_residual(const Real& y) const;
  /// The ansatz as a log-augmented formal series in y.
  formal::Series<Real> as_series() const;
};

/// Order-by-order matching of A(f_a(y)) = A(y) + 1.
AbelSeries derive_abel_series(const Real& a, int order, int digits,
                              Normalization normalization = Normalization::Scaled);

struct EvalStats {
  long iterations = 0;
  Real stop_point;
};

/// F_a(x) = A(f^n(x)) - n for n large enough that the truncation error is
/// below tol. Throws AsymptoteHit, BudgetError (10^6 iterations), DomainError.
/// `extra_steps` iterates that many times past the stopping point before
/// evaluating the series, to probe stopping-point independence.
Real F_eval(const CubicFamily& family, const Real& x, const Real& tol, const AbelSeries& series,
            EvalStats* stats = nullptr, long extra_steps = 0);

/// Preimage of t on the increasing branch (eta_0, a) (all of (0, a) when
/// a <= sqrt(3)). Throws DomainError when t is outside the branch range.
Real inverse_branch(const CubicFamily& family, const Real& t);

enum class CriticalKind { Minimum, Maximum, Flat, Asymptote };
std::string to_string(CriticalKind kind);

struct CriticalChain {
  Real a;
  std::vector<Real> xi;
  std::vector<Real> eta;
  std::vector<Real> F_xi;
  std::optional<std::vector<Real>> F_eta;  ///< absent for the a = 2 asymptote chain
  bool is_asymptote_chain = false;
  std::vector<CriticalKind> xi_kind;  ///< from sampled second differences
  std::vector<CriticalKind> eta_kind;
};

CriticalChain critical_chain(const CubicFamily& family, int k_max, const AbelSeries& series, const Real& tol);

/// Classifies a critical point from F at x - h, x, x + h.
CriticalKind classify_critical(const CubicFamily& family, const Real& x, const Real& h, const AbelSeries& series,
                               const Real& tol);

struct GraphRow {
  Real x;
  Real f;
  std::optional<Real> F;
};

struct GraphSample {
  Real x_lo;
  Real x_hi;
  int count = 0;
  std::vector<GraphRow> rows;
};

/// Uniform grid of (x, f_a(x), F_a(x)); failing points get an empty F.
GraphSample sample_graph(const CubicFamily& family, const Real& x_lo, const Real& x_hi, int count,
                         const AbelSeries& series, const Real& tol);

/// Header `x,f_a,F_a`; null F becomes an empty field.
std::string to_csv(const GraphSample& sample);
nlohmann::json to_json(const CriticalChain& chain);
nlohmann::json to_json(const AbelSeries& series);

}  // namespace iterlab::abel
