#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "iterlab/formal/rational.hpp"
#include "iterlab/real.hpp"

/// Convergence rates of the metallic-mean continued fractions
/// x_k = m + 1/x_{k-1}, x_0 = m.
namespace iterlab::cf {

using formal::Rational;

struct MetallicParams {
  int m = 1;
  Real rho;       ///< positive root of rho^2 = m rho + 1
  Real lambda;    ///< 1/(1 + m rho)^2, derivative of the two-step map at rho
  long discriminant = 5;  ///< m^2 + 4
};

/// Throws DomainError for m < 1.
MetallicParams metallic_params(int m, int digits);

struct ConvergentState {
  int k = 0;
  Rational x;
};

/// Exact convergents x_0..x_{k_max}.
std::vector<ConvergentState> convergents(int m, int k_max);

/// Exact sign of x - rho for a positive rational x, via x^2 - m x - 1.
int compare_with_rho(const Rational& x, int m);

/// x -> (a x + b) / (c x + d)
struct Mobius {
  Real a, b, c, d;
  Real operator()(const Real& x) const { return (a * x + b) / (c * x + d); }
};

/// The two-step maps u -> f(u), v -> g(v) around rho and their quadratic
/// remainders F(x) = (f(x) - lambda x)/x^2, G likewise.
struct AuxMapBundle {
  int m = 1;
  MetallicParams params;
  Mobius two_step;  ///< T(x) = ((m^2+1) x + m)/(m x + 1), maps x_k to x_{k+2}
  Mobius f;         ///< f(u) = T(rho + u) - rho = u/(rho^4 + m rho^2 u)
  Mobius g;         ///< g(v) = rho - T(rho - v) = v/(rho^4 - m rho^2 v)
  Real u0, v0;      ///< x_1 - rho and rho - x_0
  Real F_at_zero, G_at_zero;
  Real bound_f, bound_g;  ///< sup |F| on [0, u0], sup |G| on [0, v0]
  bool F_monotone = false;  ///< |F| sampled monotone decreasing (sup at left end)
  bool G_monotone = false;  ///< |G| sampled monotone increasing (sup at right end)
};

AuxMapBundle aux_maps(int m, int digits, int samples = 200);

/// Closed forms of the remainders, valid for all x in the map domains.
Real remainder_F(const MetallicParams& p, const Real& u);
Real remainder_G(const MetallicParams& p, const Real& v);

/// u_k = x_{2k+1} - rho and v_k = rho - x_{2k}, computed from exact
/// convergents through the conjugate (no cancellation).
Real u_from_convergent(const Rational& x_odd, const MetallicParams& p);
Real v_from_convergent(const Rational& x_even, const MetallicParams& p);

/// p + q rho
struct QuadraticIrrational {
  Rational p;
  Rational q;
};

/// Bounded search for x = p + q rho_m with |numerators|, denominators <= bound.
/// Default acceptance threshold is 10^(10 - digits(x)).
std::optional<QuadraticIrrational> recognize_quadratic(const Real& x, int m, int bound,
                                                       std::optional<Real> threshold = std::nullopt);

struct RateResult {
  MetallicParams params;
  Real L_u;         ///< product form, u0 * prod (1 + rho^4 u_j F(u_j))
  Real L_v;
  Real L_u_direct;  ///< rho^(4k) u_k from the exact convergent
  Real L_v_direct;
  std::optional<QuadraticIrrational> closed_u;
  std::optional<QuadraticIrrational> closed_v;
  int iterations = 0;
  Real tolerance;
  Real achieved;  ///< max of estimator disagreement and tail bound at stop
};

/// Throws PrecisionError when tol is below what `digits` can resolve and
/// NumericError if the iteration cap (10^4) is hit.
RateResult convergence_constants(int m, int digits, const Real& tol, bool recognize = true,
                                 int recognition_bound = 200);

struct HypothesisReport {
  int m = 1;
  int samples = 0;
  std::vector<std::string> violations;
  Real max_step_ratio;    ///< max u_{k+1}/u_k over the checked range
  Real step_ratio_bound;  ///< lambda + M_f u0 (equals 39 - 24 phi for m = 1)
  bool F_monotone = false;
  bool G_monotone = false;
  bool passed() const { return violations.empty(); }
};

HypothesisReport verify_hypotheses(int m, int samples, int digits = 60, int k_max = 40);

nlohmann::json to_json(const RateResult& r);

}  // namespace iterlab::cf
