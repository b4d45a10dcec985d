#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "iterlab/formal/poly.hpp"
#include "iterlab/formal/rational.hpp"
#include "iterlab/formal/series.hpp"
#include "iterlab/real.hpp"

/// The translated recurrence x_{n+1} = x_n + 1 + 1/x_n^2 and its constant
/// C(x_0) = lim (x_n - n).
namespace iterlab::translated {

using formal::Rational;
using RationalPoly = formal::Poly<Rational>;

/// x_n ~ n + C + sum_{k=1..order} P_k(C) / n^k with exact rational P_k.
struct ExpansionTable {
  int order = 0;
  std::vector<RationalPoly> P;  ///< P[k-1] = P_k

  const RationalPoly& at(int k) const { return P.at(static_cast<size_t>(k - 1)); }
  /// n + C + sum P_k(C) n^-k, truncated at `order` (defaults to all terms).
  Real predict(const Real& C, const Real& n, int order = -1) const;
  /// d/dC and d^2/dC^2 of the same truncated sum.
  Real predict_dC(const Real& C, const Real& n, int order = -1) const;
  Real predict_dC2(const Real& C, const Real& n, int order = -1) const;
};

/// Order-by-order matching of the ansatz against the recurrence in t = 1/n.
ExpansionTable derive_expansion(int order);

/// x_{n+1} - x_n - 1 - 1/x_n^2 with the ansatz substituted, as a series in
/// t = 1/n over Q[C]. Vanishes through t^(order+1) for a correct table.
formal::Series<RationalPoly> expansion_residual(const ExpansionTable& table);

/// One step of the recurrence.
Real step(const Real& x);
/// x_N from x_0 at `digits` precision.
Real iterate(const Real& x0, long N, int digits);

/// x_0 + sum_{n<N} 1/x_n^2; tail error is Theta(1/N).
Real naive_series_C(const Real& x0, long N, int digits);

struct CResult {
  Real x0;
  long N = 0;
  int order = 0;
  Real x_N;
  Real C;
  int newton_steps = 0;
  Real error_bound;  ///< N^-(order+1)
};

/// Solves N + C + sum P_k(C)/N^k = x_N for C by Newton from C = x_N - N.
/// Throws NumericError after 50 steps without convergence.
CResult solve_C(const Real& x0, long N, int order, int digits, const ExpansionTable& table);
/// Same, starting from a precomputed x_N.
CResult solve_C_from_orbit(const Real& x0, const Real& x_N, long N, int order, int digits,
                           const ExpansionTable& table);

/// prod_{n<N} (1 - 2/x_n^3); tail error Theta(1/N^2). Throws DomainError if a
/// factor is not positive.
Real derivative_product(const Real& x0, long N, int digits);

/// C'(x_0) * sum_{n<N} (1 - 2/x_n^3)^-1 6/x_n^4, using the partial product
/// for C'. This formula assumes an interchange of limits that does not hold;
/// it is kept to reproduce the discrepancy.
struct FlawedEstimate {
  Real value;
  static constexpr bool known_flawed = true;
};
FlawedEstimate flawed_second_series(const Real& x0, long N, int digits);

struct FiniteDifference {
  Real epsilon;
  Real C_minus, C_center, C_plus;
  Real first;   ///< (C(x0+e) - C(x0-e)) / (2e)
  Real second;  ///< (C(x0+e) - 2C(x0) + C(x0-e)) / e^2
};

/// Minimum digits for the central stencil at step epsilon.
int required_fd_digits(const Real& epsilon);

/// Central differences from three solve_C evaluations, run concurrently.
/// Throws PrecisionError when digits < required_fd_digits(epsilon).
FiniteDifference finite_difference(const Real& x0, const Real& epsilon, long N, int order, int digits,
                                   const ExpansionTable& table);

struct ForwardDerivatives {
  Real t_N;  ///< dx_N/dx_0
  Real h_N;  ///< d^2x_N/dx_0^2
  Real x_N;
  /// C' and C'' with the map x_N -> C inverted through the expansion at N,
  /// which removes the O(1/N^2) tails of t_N and h_N. When N is too small
  /// for the expansion to be inverted these are t_N and h_N unchanged.
  Real first;
  Real second;
  bool corrected = false;
};

/// Propagates (x, dx/dx0, d^2x/dx0^2) through N steps:
///   t' = t (1 - 2/x^3),  h' = h (1 - 2/x^3) + t^2 6/x^4.
ForwardDerivatives forward_derivatives(const Real& x0, long N, int digits, const ExpansionTable& table,
                                       int order);

struct DerivativeReport {
  Real x0;
  long N = 0;
  int order = 0;
  int digits = 0;
  Real C;
  Real C1_product;
  Real C1_fd;
  Real C1_forward;
  Real C2_fd;
  Real C2_forward;
  Real C2_flawed_series;
  Real t_N;
  Real h_N;
  Real epsilon;
  bool has_fd = false;
  bool has_forward = false;
  bool has_product = false;
  bool has_series = false;
};

struct DerivativeSelection {
  bool fd = true;
  bool forward = true;
  bool product = true;
  bool series = true;
};

DerivativeReport derivative_report(const Real& x0, long N, int order, int digits, const Real& epsilon,
                                   const DerivativeSelection& which, const ExpansionTable& table);

nlohmann::json to_json(const DerivativeReport& r);
nlohmann::json to_json(const ExpansionTable& table);
/// The expansion as a LaTeX display, one term per line.
std::string to_latex(const ExpansionTable& table);

}  // namespace iterlab::translated
