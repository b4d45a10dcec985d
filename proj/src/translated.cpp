#include "iterlab/translated.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include "iterlab/errors.hpp"
#include "iterlab/formal/json.hpp"

namespace iterlab::translated {

using formal::Series;
using RSeries = Series<RationalPoly>;

namespace {

constexpr int kNewtonCap = 50;

// 1 - 2/x^3, shared by every loop that must agree bit-for-bit.
Real contraction(const Real& x) { return Real(1) - Real(2) / (x * x * x); }

// 6/x^4
Real curvature(const Real& x) {
  const Real x2 = x * x;
  return Real(6) / (x2 * x2);
}

Real lift(const Rational& q, int digits) { return q.to_real(digits); }

// sum_{k=1..order} p_k(C) * s^k by Horner in s = 1/n.
Real sum_terms(const std::vector<RationalPoly>& polys, const Real& C, const Real& s, int order) {
  const int digits = C.digits();
  Real acc(0, digits);
  for (int k = order; k >= 1; --k) {
    const Real pk = polys[static_cast<size_t>(k - 1)].evaluate(C, [&](const Rational& q) { return lift(q, digits); });
    acc = (acc + pk) * s;
  }
  return acc;
}

int clamp_order(const ExpansionTable& t, int order) { return order < 0 ? t.order : std::min(order, t.order); }

RSeries residual_for(const std::vector<RationalPoly>& P, int top) {
  // Series in t = 1/n through t^top.
  const RationalPoly C = RationalPoly::variable("C");
  RSeries lhs("t", top);
  for (size_t i = 0; i < P.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    if (P[i].is_zero() || k > top) continue;
    // P_k t^k ((1+t)^-k - 1)
    const RSeries shift = formal::binomial_expand<RationalPoly>(k, top - k);
    for (int j = 1; j <= top - k; ++j) {
      lhs.set_coefficient(k + j, lhs.coefficient(k + j) + P[i] * shift.coefficient(j));
    }
  }
  // 1/x_n^2 = t^2 / s(t)^2 with s = 1 + C t + sum P_k t^(k+1).
  const int inner_order = std::max(top - 2, 0);
  RSeries s("t", inner_order);
  s.set_coefficient(0, RationalPoly(1));
  if (inner_order >= 1) s.set_coefficient(1, C);
  for (size_t i = 0; i < P.size(); ++i) {
    const int power = static_cast<int>(i) + 2;
    if (power <= inner_order) s.set_coefficient(power, P[i]);
  }
  const RSeries inv = s.reciprocal();
  const RSeries inv2 = inv * inv;
  RSeries rhs("t", top);
  for (int j = 0; j + 2 <= top; ++j) rhs.set_coefficient(j + 2, inv2.coefficient(j));
  return lhs - rhs;
}

std::string latex_rational(const Rational& q, bool leading) {
  std::string sign = q.raw() < 0 ? "-" : (leading ? "" : "+");
  const Rational a = q.raw() < 0 ? -q : q;
  if (a.is_integer()) return sign + a.to_string();
  return sign + "\\frac{" + a.numerator().get_str() + "}{" + a.denominator().get_str() + "}";
}

std::string latex_poly(const RationalPoly& p) {
  std::string out;
  for (int i = 0; i <= p.degree(); ++i) {
    const Rational c = p.coefficient(i);
    if (c.is_zero()) continue;
    const bool leading = out.empty();
    if (i == 0) {
      out += latex_rational(c, leading);
      continue;
    }
    if (c == Rational(1)) {
      out += leading ? "" : "+";
    } else if (c == Rational(-1)) {
      out += "-";
    } else {
      out += latex_rational(c, leading);
    }
    out += "C";
    if (i > 1) out += "^{" + std::to_string(i) + "}";
  }
  return out.empty() ? "0" : out;
}

nlohmann::json opt(bool present, const Real& x) { return present ? nlohmann::json(x.to_string()) : nlohmann::json(nullptr); }

}  // namespace

Real ExpansionTable::predict(const Real& C, const Real& n, int order_limit) const {
  const Real s = Real(1) / n;
  return n + C + sum_terms(P, C, s, clamp_order(*this, order_limit));
}

Real ExpansionTable::predict_dC(const Real& C, const Real& n, int order_limit) const {
  std::vector<RationalPoly> d;
  for (const auto& p : P) d.push_back(p.derivative());
  return Real(1) + sum_terms(d, C, Real(1) / n, clamp_order(*this, order_limit));
}

Real ExpansionTable::predict_dC2(const Real& C, const Real& n, int order_limit) const {
  std::vector<RationalPoly> d;
  for (const auto& p : P) d.push_back(p.derivative().derivative());
  return sum_terms(d, C, Real(1) / n, clamp_order(*this, order_limit));
}

ExpansionTable derive_expansion(int order) {
  if (order < 1) throw DomainError("expansion order must be >= 1");
  std::vector<RationalPoly> P(static_cast<size_t>(order));
  for (int k = 1; k <= order; ++k) {
    // With P_k = 0, the t^(k+1) residual is r; P_k contributes -k P_k there.
    const RSeries r = residual_for(P, k + 1);
    P[static_cast<size_t>(k - 1)] = formal::divide_by_integer(r.coefficient(k + 1), k);
  }
  return ExpansionTable{order, std::move(P)};
}

formal::Series<RationalPoly> expansion_residual(const ExpansionTable& table) {
  return residual_for(table.P, table.order + 1);
}

Real step(const Real& x) { return x + Real(1) + Real(1) / (x * x); }

Real iterate(const Real& x0, long N, int digits) {
  if (N < 0) throw DomainError("iteration count must be nonnegative");
  Real x = x0.with_digits(digits);
  for (long n = 0; n < N; ++n) x = step(x);
  return x;
}

Real naive_series_C(const Real& x0, long N, int digits) {
  if (N < 1) throw DomainError("naive_series_C needs N >= 1");
  Real x = x0.with_digits(digits);
  Real sum = x;
  for (long n = 0; n < N; ++n) {
    sum += Real(1) / (x * x);
    x = step(x);
  }
  return sum;
}

CResult solve_C_from_orbit(const Real& x0, const Real& x_N, long N, int order, int digits,
                           const ExpansionTable& table) {
  if (order > table.order) throw DomainError("order exceeds the derived expansion table");
  const Real n(N, digits);
  const Real xN = x_N.with_digits(digits);
  Real C = xN - n;
  // g carries rounding noise on the scale of x_N
  const Real stop = Real::pow10(-digits + 3, digits) * std::max(abs(xN), Real(1));
  CResult out;
  out.x0 = x0;
  out.N = N;
  out.order = order;
  out.x_N = xN;
  for (int i = 1; i <= kNewtonCap; ++i) {
    const Real g = table.predict(C, n, order) - xN;
    const Real dg = table.predict_dC(C, n, order);
    const Real delta = g / dg;
    C -= delta;
    if (abs(delta) <= stop) {
      out.C = C;
      out.newton_steps = i;
      out.error_bound = pow(Real(1, digits) / n, order + 1);
      return out;
    }
  }
  throw NumericError("solve_C: Newton did not converge in 50 steps");
}

CResult solve_C(const Real& x0, long N, int order, int digits, const ExpansionTable& table) {
  if (N < 1) throw DomainError("solve_C needs N >= 1");
  return solve_C_from_orbit(x0, iterate(x0, N, digits), N, order, digits, table);
}

Real derivative_product(const Real& x0, long N, int digits) {
  if (N < 1) throw DomainError("derivative_product needs N >= 1");
  Real x = x0.with_digits(digits);
  Real prod(1, digits);
  for (long n = 0; n < N; ++n) {
    const Real factor = contraction(x);
    if (factor.sign() <= 0) throw DomainError("product factor 1 - 2/x^3 is not positive");
    prod *= factor;
    x = step(x);
  }
  return prod;
}

FlawedEstimate flawed_second_series(const Real& x0, long N, int digits) {
  if (N < 1) throw DomainError("flawed_second_series needs N >= 1");
  Real x = x0.with_digits(digits);
  Real prod(1, digits);
  Real sum(0, digits);
  for (long n = 0; n < N; ++n) {
    const Real factor = contraction(x);
    prod *= factor;
    sum += curvature(x) / factor;
    x = step(x);
  }
  return FlawedEstimate{prod * sum};
}

int required_fd_digits(const Real& epsilon) {
  const double e = -std::log10(abs(epsilon).to_double());
  return static_cast<int>(std::ceil(2.0 * e)) + 40;
}

FiniteDifference finite_difference(const Real& x0_in, const Real& epsilon, long N, int order, int digits,
                                   const ExpansionTable& table) {
  if (epsilon.is_zero()) throw DomainError("finite-difference step must be nonzero");
  const int needed = required_fd_digits(epsilon);
  if (digits < needed) {
    throw PrecisionError("finite differences with this step need at least " + std::to_string(needed) + " digits",
                         needed);
  }
  const Real x0 = x0_in.with_digits(digits);
  const Real e = abs(epsilon).with_digits(digits);
  const Real points[3] = {x0 - e, x0, x0 + e};
  Real values[3];
  std::exception_ptr errors[3];
  std::vector<std::thread> workers;
  for (int i = 0; i < 3; ++i) {
    workers.emplace_back([&, i] {
      try {
        values[i] = solve_C(points[i], N, order, digits, table).C;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  FiniteDifference out;
  out.epsilon = e;
  out.C_minus = values[0];
  out.C_center = values[1];
  out.C_plus = values[2];
  out.first = (values[2] - values[0]) / (Real(2) * e);
  out.second = (values[2] - Real(2) * values[1] + values[0]) / (e * e);
  return out;
}

ForwardDerivatives forward_derivatives(const Real& x0, long N, int digits, const ExpansionTable& table, int order) {
  if (N < 1) throw DomainError("forward_derivatives needs N >= 1");
  Real x = x0.with_digits(digits);
  Real t(1, digits);
  Real h(0, digits);
  for (long n = 0; n < N; ++n) {
    const Real factor = contraction(x);
    h = h * factor + t * t * curvature(x);
    t *= factor;
    x = step(x);
  }
  ForwardDerivatives out;
  out.t_N = t;
  out.h_N = h;
  out.x_N = x;

  // C = Chat(x_N) where predict(Chat(x), N) = x; chain rule through Chat.
  const Real n(N, digits);
  Real C;
  try {
    C = solve_C_from_orbit(x0, x, N, order, digits, table).C;
  } catch (const NumericError&) {
    out.first = t;
    out.second = h;
    return out;
  }
  out.corrected = true;
  const Real g1 = table.predict_dC(C, n, order);
  const Real g2 = table.predict_dC2(C, n, order);
  const Real dC = Real(1) / g1;
  const Real d2C = -g2 / (g1 * g1 * g1);
  out.first = dC * t;
  out.second = d2C * t * t + dC * h;
  return out;
}

DerivativeReport derivative_report(const Real& x0_in, long N, int order, int digits, const Real& epsilon,
                                   const DerivativeSelection& which, const ExpansionTable& table) {
  DerivativeReport r;
  const Real x0 = x0_in.with_digits(digits);
  r.x0 = x0;
  r.N = N;
  r.order = order;
  r.digits = digits;
  r.epsilon = epsilon;
  r.has_fd = which.fd;
  r.has_forward = which.forward;
  r.has_product = which.product;
  r.has_series = which.series;

  if (which.fd) {
    const FiniteDifference fd = finite_difference(x0, epsilon, N, order, digits, table);
    r.C = fd.C_center;
    r.C1_fd = fd.first;
    r.C2_fd = fd.second;
  } else {
    r.C = solve_C(x0, N, order, digits, table).C;
  }
  if (which.forward) {
    const ForwardDerivatives fw = forward_derivatives(x0, N, digits, table, order);
    r.C1_forward = fw.first;
    r.C2_forward = fw.second;
    r.t_N = fw.t_N;
    r.h_N = fw.h_N;
  }
  if (which.product) r.C1_product = derivative_product(x0, N, digits);
  if (which.series) r.C2_flawed_series = flawed_second_series(x0, N, digits).value;
  return r;
}

nlohmann::json to_json(const DerivativeReport& r) {
  nlohmann::json deltas = nlohmann::json::object();
  if (r.has_fd && r.has_product) deltas["C1_fd_minus_product"] = (r.C1_fd - r.C1_product).to_string(20);
  if (r.has_fd && r.has_forward) {
    deltas["C1_fd_minus_forward"] = (r.C1_fd - r.C1_forward).to_string(20);
    deltas["C2_fd_minus_forward"] = (r.C2_fd - r.C2_forward).to_string(20);
  }
  if (r.has_fd && r.has_series) deltas["C2_flawed_minus_fd"] = (r.C2_flawed_series - r.C2_fd).to_string(20);

  nlohmann::json out = {
      {"x0", r.x0.to_string()},
      {"N", r.N},
      {"K", r.order},
      {"precision", r.digits},
      {"C", r.C.to_string()},
      {"C1_product", opt(r.has_product, r.C1_product)},
      {"C1_fd", opt(r.has_fd, r.C1_fd)},
      {"C1_forward", opt(r.has_forward, r.C1_forward)},
      {"C2_fd", opt(r.has_fd, r.C2_fd)},
      {"C2_forward", opt(r.has_forward, r.C2_forward)},
      {"C2_flawed_series", opt(r.has_series, r.C2_flawed_series)},
      {"C2_flawed_series_status", r.has_series ? nlohmann::json("known-flawed") : nlohmann::json(nullptr)},
      {"t_N", opt(r.has_forward, r.t_N)},
      {"h_N", opt(r.has_forward, r.h_N)},
      {"epsilon", opt(r.has_fd, r.epsilon)},
      {"deltas", deltas},
  };
  return out;
}

nlohmann::json to_json(const ExpansionTable& table) {
  nlohmann::json terms = nlohmann::json::array();
  for (int k = 1; k <= table.order; ++k) {
    nlohmann::json term = formal::to_json(table.at(k));
    term["k"] = k;
    terms.push_back(term);
  }
  return {{"order", table.order}, {"P", terms}};
}

std::string to_latex(const ExpansionTable& table) {
  std::ostringstream os;
  os << "\\begin{align*}\n";
  os << "x_{n} &\\sim n+C";
  for (int k = 1; k <= table.order; ++k) {
    const RationalPoly& p = table.at(k);
    os << (k == 1 ? "" : " \\\\\n  &");
    const std::string power = k == 1 ? "\\frac{1}{n}" : "\\frac{1}{n^{" + std::to_string(k) + "}}";
    if (p.degree() == 0) {
      const std::string c = latex_rational(p.coefficient(0), false);
      os << (c == "+1" ? "+" : (c == "-1" ? "-" : c)) << power;
    } else {
      os << "+\\left(" << latex_poly(p) << "\\right)" << power;
    }
  }
  os << "\n\\end{align*}\n";
  return os.str();
}

}  // namespace iterlab::translated
