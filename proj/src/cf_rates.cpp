#include "iterlab/cf_rates.hpp"

#include <algorithm>
#include <cmath>

#include "iterlab/errors.hpp"

namespace iterlab::cf {

namespace {

constexpr int kIterationCap = 10000;
constexpr int kGuardDigits = 10;

Real integer_real(const mpz_class& z, int digits) { return Rational(mpq_class(z)).to_real(digits); }

// Accepts x when |x - candidate| < threshold.
bool accept(const Real& x, const Rational& p, const Rational& q, const Real& rho, const Real& threshold) {
  const int digits = x.digits();
  const Real candidate = p.to_real(digits) + q.to_real(digits) * rho;
  return abs(x - candidate) < threshold;
}

nlohmann::json closed_json(const std::optional<QuadraticIrrational>& c) {
  if (!c) return nullptr;
  return {{"p", c->p.to_string()}, {"q", c->q.to_string()}};
}

}  // namespace

MetallicParams metallic_params(int m, int digits) {
  if (m < 1) throw DomainError("metallic mean needs m >= 1");
  MetallicParams out;
  out.m = m;
  out.discriminant = static_cast<long>(m) * m + 4;
  const Real d(out.discriminant, digits);
  out.rho = (Real(m, digits) + sqrt(d)) / Real(2, digits);
  const Real base = Real(1, digits) + Real(m, digits) * out.rho;
  out.lambda = Real(1, digits) / (base * base);
  return out;
}

std::vector<ConvergentState> convergents(int m, int k_max) {
  if (m < 1) throw DomainError("metallic mean needs m >= 1");
  std::vector<ConvergentState> out;
  out.reserve(static_cast<size_t>(std::max(k_max, 0)) + 1);
  Rational x(m);
  out.push_back({0, x});
  for (int k = 1; k <= k_max; ++k) {
    x = Rational(m) + Rational(1) / x;
    out.push_back({k, x});
  }
  return out;
}

int compare_with_rho(const Rational& x, int m) {
  if (x.raw() <= 0) return -1;
  const Rational quadratic = x * x - Rational(m) * x - Rational(1);
  return quadratic.is_zero() ? 0 : (quadratic.raw() > 0 ? 1 : -1);
}

Real remainder_F(const MetallicParams& p, const Real& u) {
  const Real rho2 = p.rho * p.rho;
  return -Real(p.m) / (rho2 * rho2 * (rho2 + Real(p.m) * u));
}

Real remainder_G(const MetallicParams& p, const Real& v) {
  const Real rho2 = p.rho * p.rho;
  return Real(p.m) / (rho2 * rho2 * (rho2 - Real(p.m) * v));
}

Real u_from_convergent(const Rational& x_odd, const MetallicParams& p) {
  // P - Q rho = (P^2 - m P Q - Q^2) / (P + Q/rho), the conjugate root being -1/rho.
  const int digits = p.rho.digits();
  const mpz_class num = x_odd.numerator();
  const mpz_class den = x_odd.denominator();
  const mpz_class norm = num * num - p.m * num * den - den * den;
  const Real P = integer_real(num, digits);
  const Real Q = integer_real(den, digits);
  return integer_real(norm, digits) / (Q * (P + Q / p.rho));
}

Real v_from_convergent(const Rational& x_even, const MetallicParams& p) {
  return -u_from_convergent(x_even, p);
}

AuxMapBundle aux_maps(int m, int digits, int samples) {
  AuxMapBundle out;
  out.m = m;
  out.params = metallic_params(m, digits);
  const MetallicParams& p = out.params;
  const Real rho2 = p.rho * p.rho;
  const Real rho4 = rho2 * rho2;
  const Real mr(m, digits);

  out.two_step = {Real(static_cast<long>(m) * m + 1, digits), mr, mr, Real(1, digits)};
  out.f = {Real(1, digits), Real(0, digits), mr * rho2, rho4};
  out.g = {Real(1, digits), Real(0, digits), -(mr * rho2), rho4};
  out.u0 = u_from_convergent(Rational(m) + Rational(1, m), p);
  out.v0 = p.rho - mr;
  out.F_at_zero = -mr / (rho4 * rho2);
  out.G_at_zero = mr / (rho4 * rho2);

  // Sample the remainders through the two-step map itself rather than the
  // closed forms, so the bounds double as a check of the algebra.
  const Mobius& T = out.two_step;
  auto F_sampled = [&](const Real& u) { return (T(p.rho + u) - p.rho - p.lambda * u) / (u * u); };
  auto G_sampled = [&](const Real& v) { return (p.rho - T(p.rho - v) - p.lambda * v) / (v * v); };

  out.bound_f = abs(out.F_at_zero);
  out.bound_g = abs(out.G_at_zero);
  out.F_monotone = true;
  out.G_monotone = true;
  Real prev_f = abs(out.F_at_zero);
  Real prev_g = abs(out.G_at_zero);
  const int n = std::max(samples, 2);
  for (int i = 1; i <= n; ++i) {
    const Real frac = Real(i, digits) / Real(n, digits);
    const Real F = abs(F_sampled(out.u0 * frac));
    const Real G = abs(G_sampled(out.v0 * frac));
    out.bound_f = std::max(out.bound_f, F);
    out.bound_g = std::max(out.bound_g, G);
    if (F > prev_f) out.F_monotone = false;
    if (G < prev_g) out.G_monotone = false;
    prev_f = F;
    prev_g = G;
  }
  return out;
}

std::optional<QuadraticIrrational> recognize_quadratic(const Real& x, int m, int bound,
                                                       std::optional<Real> threshold) {
  if (bound < 1) throw DomainError("recognition bound must be positive");
  const int digits = x.digits();
  const Real rho = metallic_params(m, digits).rho;
  const Real thr = threshold ? *threshold : Real::pow10(10 - digits, digits);
  const Real limit(bound, digits);

  for (int den = 1; den <= bound; ++den) {
    const Real scaled = x * Real(den, digits);
    // q numerators in order 0, 1, -1, 2, -2, ... so the simplest form wins.
    for (int step = 0; step <= 2 * bound; ++step) {
      const int qn = (step % 2 == 1) ? (step + 1) / 2 : -(step / 2);
      const Real pn = round(scaled - Real(qn, digits) * rho);
      if (abs(pn) > limit) continue;
      const Rational p = Rational::parse(pn.round_to_integer_string()) / Rational(den);
      const Rational q(qn, den);
      if (accept(x, p, q, rho, thr)) return QuadraticIrrational{p, q};
    }
  }
  return std::nullopt;
}

RateResult convergence_constants(int m, int digits, const Real& tol, bool recognize, int recognition_bound) {
  if (tol.sign() <= 0) throw DomainError("tolerance must be positive");
  if (tol < Real::pow10(5 - digits, digits)) {
    const int needed = static_cast<int>(std::ceil(-std::log10(tol.to_double()))) + 5;
    throw PrecisionError("tolerance unreachable at " + std::to_string(digits) + " digits", needed);
  }
  const int work = digits + kGuardDigits;
  const MetallicParams p = metallic_params(m, work);
  const Real one(1, work);
  const Real rho4 = pow(p.rho, 4);
  const Real tol_w = tol.with_digits(work);

  const Real mr(m, work);
  const Mobius f{one, Real(0, work), mr * p.rho * p.rho, rho4};
  const Mobius g{one, Real(0, work), -(mr * p.rho * p.rho), rho4};

  // Exact convergents x_{2k} (even) and x_{2k+1} (odd).
  Rational even(m);
  Rational odd = Rational(m) + Rational(1) / even;

  Real u = u_from_convergent(odd, p);
  Real v = v_from_convergent(even, p);
  const Real u0 = u;
  const Real v0 = v;
  Real prod_u = one;
  Real prod_v = one;
  Real scale = one;  // rho^(4k)

  RateResult out;
  for (int k = 0; k <= kIterationCap; ++k) {
    const Real direct_u = scale * u_from_convergent(odd, p);
    const Real direct_v = scale * v_from_convergent(even, p);
    const Real est_u = u0 * prod_u;
    const Real est_v = v0 * prod_v;

    const Real factor_u = one + rho4 * u * remainder_F(p, u);
    const Real factor_v = one + rho4 * v * remainder_G(p, v);
    // The remaining product is within exp(sum |factor_j - 1|) of 1, and the
    // deviations shrink geometrically at rate lambda.
    const Real tail = std::max(abs(factor_u - one), abs(factor_v - one)) / (one - p.lambda) *
                      std::max(est_v, one) * Real(2, work);
    const Real disagreement = std::max(abs(est_u - direct_u), abs(est_v - direct_v));

    if (disagreement < tol_w && tail < tol_w) {
      out.params = metallic_params(m, digits);
      out.L_u = est_u.with_digits(digits);
      out.L_v = est_v.with_digits(digits);
      out.L_u_direct = direct_u.with_digits(digits);
      out.L_v_direct = direct_v.with_digits(digits);
      out.iterations = k;
      out.tolerance = tol;
      out.achieved = std::max(disagreement, tail).with_digits(digits);
      if (recognize) {
        const Real thr = std::max(Real::pow10(10 - digits, digits), out.achieved * Real(100));
        out.closed_u = recognize_quadratic(out.L_u, m, recognition_bound, thr);
        out.closed_v = recognize_quadratic(out.L_v, m, recognition_bound, thr);
      }
      return out;
    }

    prod_u *= factor_u;
    prod_v *= factor_v;
    u = f(u);
    v = g(v);
    scale *= rho4;
    even = Rational(m) + Rational(1) / odd;
    odd = Rational(m) + Rational(1) / even;
  }
  throw NumericError("convergence_constants: iteration cap reached before tolerance");
}

HypothesisReport verify_hypotheses(int m, int samples, int digits, int k_max) {
  if (samples < 10) throw DomainError("verify_hypotheses needs at least 10 samples");
  HypothesisReport report;
  report.m = m;
  report.samples = samples;
  const AuxMapBundle bundle = aux_maps(m, digits, samples);
  const MetallicParams& p = bundle.params;
  report.F_monotone = bundle.F_monotone;
  report.G_monotone = bundle.G_monotone;

  auto violation = [&](const std::string& what) { report.violations.push_back(what); };

  if (!bundle.f(Real(0, digits)).is_zero()) violation("f(0) != 0");
  if (!bundle.g(Real(0, digits)).is_zero()) violation("g(0) != 0");
  if (!(p.lambda < Real(1))) violation("lambda >= 1");
  if (!(p.lambda.sign() > 0)) violation("lambda <= 0");

  // Grid over the orbit range plus a geometric sweep for f, which is
  // claimed on all of x > 0.
  std::vector<Real> f_points;
  std::vector<Real> g_points;
  for (int i = 1; i <= samples; ++i) {
    const Real frac = Real(i, digits) / Real(samples, digits);
    f_points.push_back(bundle.u0 * frac);
    g_points.push_back(bundle.v0 * frac);
  }
  for (int e = -6; e <= 6; ++e) f_points.push_back(Real::pow10(e, digits));
  for (const Real& x : f_points) {
    const Real fx = bundle.f(x);
    if (!(fx.sign() > 0 && fx < x)) violation("0 < f(x) < x fails at x = " + x.to_string(12));
  }
  for (const Real& x : g_points) {
    const Real gx = bundle.g(x);
    if (!(gx.sign() > 0 && gx < x)) violation("0 < g(x) < x fails at x = " + x.to_string(12));
  }

  report.step_ratio_bound = p.lambda + bundle.bound_f * bundle.u0;
  if (!(report.step_ratio_bound < Real(1))) violation("step ratio bound lambda + M u0 >= 1");

  const auto xs = convergents(m, 2 * k_max + 3);
  report.max_step_ratio = Real(0, digits);
  for (int k = 0; k <= k_max; ++k) {
    const Real uk = u_from_convergent(xs[2 * k + 1].x, p);
    const Real uk1 = u_from_convergent(xs[2 * k + 3].x, p);
    const Real ratio = uk1 / uk;
    report.max_step_ratio = std::max(report.max_step_ratio, ratio);
    if (!(uk.sign() > 0)) violation("u_k <= 0 at k = " + std::to_string(k));
    if (ratio > report.step_ratio_bound) violation("u_{k+1}/u_k above bound at k = " + std::to_string(k));
    if (m == 1 && !(ratio < Real(3) / Real(5, digits))) {
      violation("u_{k+1} >= (3/5) u_k at k = " + std::to_string(k));
    }
  }
  if (m == 1 && !(report.step_ratio_bound < Real(3) / Real(5, digits))) violation("39 - 24 phi >= 3/5");
  return report;
}

nlohmann::json to_json(const RateResult& r) {
  return {
      {"m", r.params.m},
      {"rho", r.params.rho.to_string()},
      {"lambda", r.params.lambda.to_string()},
      {"L_u", r.L_u.to_string()},
      {"L_v", r.L_v.to_string()},
      {"L_u_direct", r.L_u_direct.to_string()},
      {"L_v_direct", r.L_v_direct.to_string()},
      {"closed_u", closed_json(r.closed_u)},
      {"closed_v", closed_json(r.closed_v)},
      {"iterations", r.iterations},
      {"tolerance", r.tolerance.to_string()},
      {"achieved", r.achieved.to_string()},
  };
}

}  // namespace iterlab::cf
