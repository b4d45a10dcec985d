#include "iterlab/abel.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "iterlab/formal/json.hpp"

namespace iterlab::abel {

using formal::Poly;
using formal::Series;

namespace {

constexpr long kIterationCap = 1000000;
constexpr int kMaxChain = 400;

Real epsilon_for(int digits) { return Real::pow10(5 - digits, digits); }

// Safeguarded Newton for f(x) = t on [lo, hi] where f - t changes sign from
// negative to positive.
Real solve_increasing(const CubicFamily& family, const Real& t, Real lo, Real hi) {
  const int digits = family.digits();
  const Real stop = Real::pow10(-digits - 2, digits);
  const Real two(2, digits);
  Real x = (lo + hi) / two;
  for (int i = 0; i < 2000; ++i) {
    const Real fx = family.map(x) - t;
    if (fx.is_zero()) return x;
    if (fx.sign() < 0) {
      lo = x;
    } else {
      hi = x;
    }
    const Real slope = family.derivative(x);
    Real next = slope.sign() > 0 ? x - fx / slope : (lo + hi) / two;
    if (!(next > lo && next < hi)) next = (lo + hi) / two;
    const Real step = abs(next - x);
    x = next;
    if (step <= stop * std::max(abs(x), Real(1))) return x;
    if (hi - lo <= stop) return (lo + hi) / two;
  }
  throw NumericError("inverse_branch: no convergence");
}

Real branch_lower_end(const CubicFamily& family) {
  const Real disc = family.a() * family.a() - Real(3);
  if (disc.sign() <= 0 || family.is_degenerate()) return Real(0, family.digits());
  return critical_pair(family.a()).second;
}

std::string real_or_empty(const std::optional<Real>& x) { return x ? x->to_string() : std::string(); }

nlohmann::json reals_json(const std::vector<Real>& xs) {
  nlohmann::json out = nlohmann::json::array();
  for (const Real& x : xs) out.push_back(x.to_string());
  return out;
}

nlohmann::json kinds_json(const std::vector<CriticalKind>& ks) {
  nlohmann::json out = nlohmann::json::array();
  for (CriticalKind k : ks) out.push_back(to_string(k));
  return out;
}

std::vector<Real> build_asymptote_chain(const CubicFamily& family) {
  std::vector<Real> chain{Real(1, family.digits())};
  const Real width = epsilon_for(family.digits());
  while (static_cast<int>(chain.size()) < kMaxChain && family.a() - chain.back() > width) {
    chain.push_back(solve_increasing(family, chain.back(), chain.front(), family.a()));
  }
  return chain;
}

}  // namespace

CubicFamily::CubicFamily(Real a, int digits) : a_(a.with_digits(digits)), digits_(digits) {
  const Real eps = epsilon_for(digits);
  if (a_ < Real(1) - eps || a_ > Real(2) + eps) {
    throw DomainError("cubic family parameter must satisfy 1 <= a <= 2, got " + a_.to_string(12));
  }
  asymptotic_ = abs(a_ - Real(2)) <= eps;
  degenerate_ = abs(a_ * a_ - Real(3)) <= eps;
  if (asymptotic_) asymptote_chain_ = build_asymptote_chain(*this);
}

Real CubicFamily::map(const Real& x) const { return x * (Real(1) - a_ * x + x * x); }

Real CubicFamily::derivative(const Real& x) const {
  return Real(1) - Real(2) * a_ * x + Real(3) * x * x;
}

std::pair<Real, Real> critical_pair(const Real& a) {
  const int digits = a.digits();
  const Real disc = a * a - Real(3);
  const Real eps = epsilon_for(digits);
  const Real three(3, digits);
  if (disc < -eps) throw DomainError("no critical points for a < sqrt(3)");
  if (abs(disc) <= eps) {
    const Real x = a / three;
    return {x, x};
  }
  const Real root = sqrt(disc);
  return {(a - root) / three, (a + root) / three};
}

Real AbelSeries::evaluate(const Real& y) const {
  Real acc(0, y.digits());
  for (size_t j = regular.size(); j-- > 0;) {
    acc = (acc + regular[j].coefficient(0)) * y;
  }
  return principal / y + constant + log_coefficient * log(y) + acc;
}

Real AbelSeries::numeric_residual(const Real& y) const {
  const Real fy = y * (Real(1) - a * y + y * y);
  return abs(evaluate(fy) - evaluate(y) - Real(1));
}

Series<Real> AbelSeries::as_series() const {
  Series<Real> s("y", order + 1);
  s.set_coefficient(0, constant);
  for (int j = 1; j <= order; ++j) s.set_coefficient(j, regular[static_cast<size_t>(j - 1)].coefficient(0));
  return s.with_principal(principal).with_log(log_coefficient);
}

AbelSeries derive_abel_series(const Real& a_in, int order, int digits, Normalization normalization) {
  if (order < 1) throw DomainError("Abel series order must be >= 1");
  const Real a = a_in.with_digits(digits);
  CubicFamily family(a, digits);  // range check
  (void)family;

  const int K = order;
  const Real zero(0, digits);
  Series<Real> inner("y", K + 3, {zero, Real(1, digits), -a, Real(1, digits)});

  Series<Real> ansatz = Series<Real>("y", K + 1).with_principal(zero).with_log(zero);
  const Series<Real> one = Series<Real>::constant("y", K + 1, Real(1, digits));
  auto residual = [&](const Series<Real>& A) { return A.compose_inner(inner) - A - one; };

  // Each unknown enters its matching order linearly:
  //   principal at y^0 with coefficient a, log at y^1 with -a, d_j at y^(j+1) with -a j.
  ansatz = ansatz.with_principal(-residual(ansatz).coefficient(0) / a);
  ansatz = ansatz.with_log(residual(ansatz).coefficient(1) / a);
  for (int j = 1; j <= K; ++j) {
    const Real r = residual(ansatz).coefficient(j + 1);
    ansatz.set_coefficient(j, r / (a * Real(j, digits)));
  }

  const Series<Real> final_residual = residual(ansatz);
  Real worst = abs(final_residual.principal().value_or(zero));
  worst = std::max(worst, abs(final_residual.log_coefficient().value_or(zero)));
  for (const Real& c : final_residual.coefficients()) worst = std::max(worst, abs(c));

  AbelSeries out;
  out.a = a;
  out.order = K;
  out.normalization = normalization;
  out.principal = *ansatz.principal();
  out.log_coefficient = *ansatz.log_coefficient();
  out.constant = normalization == Normalization::Scaled ? out.log_coefficient * log(a) : zero;
  for (int j = 1; j <= K; ++j) {
    out.regular.emplace_back("L", std::vector<Real>{ansatz.coefficient(j)});
  }
  out.max_log_degree = 0;
  for (const auto& d : out.regular) out.max_log_degree = std::max(out.max_log_degree, d.degree());
  out.symbolic_residual = worst;
  if (worst > Real::pow10(10 - digits, digits) * Real(1000)) {
    throw NumericError("Abel series residual did not vanish: " + worst.to_string(6));
  }
  return out;
}

Real F_eval(const CubicFamily& family, const Real& x_in, const Real& tol, const AbelSeries& series,
            EvalStats* stats, long extra_steps) {
  const int digits = family.digits();
  const Real x0 = x_in.with_digits(digits);
  if (!(x0.sign() > 0 && x0 < family.a())) throw DomainError("F_eval needs 0 < x < a");
  if (tol.sign() <= 0) throw DomainError("tolerance must be positive");

  const int K = series.order;
  const Real root = exp(log(tol.with_digits(digits)) / Real(K + 1, digits));
  const Real threshold = std::min(Real::pow10(-3, digits), root);
  const Real lead = std::max(abs(series.regular.back().coefficient(0)), Real(1));
  const Real width = epsilon_for(digits);

  const std::vector<Real>& chain = family.asymptote_chain();
  auto check_hit = [&](const Real& x) {
    if (x.sign() <= 0) throw AsymptoteHit("orbit reached the fixed point 0");
    if (chain.empty() || x < chain.front() - width) return;
    auto it = std::lower_bound(chain.begin(), chain.end(), x);
    if ((it != chain.end() && abs(*it - x) <= width) || (it != chain.begin() && abs(*(it - 1) - x) <= width)) {
      throw AsymptoteHit("orbit hit the preimage chain of 1 at x = " + x.to_string(15));
    }
  };

  Real x = x0;
  check_hit(x);
  long n = 0;
  for (;;) {
    if (x < threshold && lead * pow(x, K + 1) < tol) {
      const Real value = series.evaluate(x) - Real(n, digits);
      const Real next = family.map(x);
      check_hit(next);
      const Real check = series.evaluate(next) - Real(n + 1, digits);
      if (abs(value - check) < tol) {
        for (long i = 0; i < extra_steps; ++i) {
          x = family.map(x);
          check_hit(x);
          ++n;
        }
        if (stats != nullptr) {
          stats->iterations = n;
          stats->stop_point = x;
        }
        return extra_steps > 0 ? series.evaluate(x) - Real(n, digits) : value;
      }
    }
    if (++n > kIterationCap) throw BudgetError("F_eval: iteration cap exceeded");
    x = family.map(x);
    check_hit(x);
  }
}

Real inverse_branch(const CubicFamily& family, const Real& t_in) {
  const Real t = t_in.with_digits(family.digits());
  const Real lo = branch_lower_end(family);
  const Real hi = family.a();
  if (!(t > family.map(lo) && t < hi)) {
    throw DomainError("inverse_branch: t = " + t.to_string(15) + " outside the increasing branch range");
  }
  return solve_increasing(family, t, lo, hi);
}

std::string to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::Minimum: return "minimum";
    case CriticalKind::Maximum: return "maximum";
    case CriticalKind::Flat: return "flat";
    case CriticalKind::Asymptote: return "asymptote";
  }
  return "unknown";
}

CriticalKind classify_critical(const CubicFamily& family, const Real& x, const Real& h, const AbelSeries& series,
                               const Real& tol) {
  const Real mid = F_eval(family, x, tol, series);
  const Real left = F_eval(family, x - h, tol, series) - mid;
  const Real right = F_eval(family, x + h, tol, series) - mid;
  if (left.sign() > 0 && right.sign() > 0) return CriticalKind::Minimum;
  if (left.sign() < 0 && right.sign() < 0) return CriticalKind::Maximum;
  return CriticalKind::Flat;
}

CriticalChain critical_chain(const CubicFamily& family, int k_max, const AbelSeries& series, const Real& tol) {
  if (k_max < 0) throw DomainError("chain length must be nonnegative");
  const int digits = family.digits();
  auto [xi0, eta0] = critical_pair(family.a());

  CriticalChain out;
  out.a = family.a();
  out.is_asymptote_chain = family.has_asymptotes();
  out.xi.push_back(xi0);
  out.eta.push_back(eta0);
  for (int k = 1; k <= k_max; ++k) {
    out.xi.push_back(inverse_branch(family, out.xi.back()));
    out.eta.push_back(family.is_degenerate() ? out.xi.back() : inverse_branch(family, out.eta.back()));
  }

  const Real h = Real::pow10(-8, digits);
  for (const Real& x : out.xi) {
    out.F_xi.push_back(F_eval(family, x, tol, series));
    out.xi_kind.push_back(classify_critical(family, x, h, series, tol));
  }
  if (out.is_asymptote_chain) {
    out.eta_kind.assign(out.eta.size(), CriticalKind::Asymptote);
  } else {
    std::vector<Real> F_eta;
    for (const Real& x : out.eta) {
      F_eta.push_back(F_eval(family, x, tol, series));
      out.eta_kind.push_back(classify_critical(family, x, h, series, tol));
    }
    out.F_eta = std::move(F_eta);
  }
  return out;
}

GraphSample sample_graph(const CubicFamily& family, const Real& x_lo, const Real& x_hi, int count,
                         const AbelSeries& series, const Real& tol) {
  const int digits = family.digits();
  const Real lo = x_lo.with_digits(digits);
  const Real hi = x_hi.with_digits(digits);
  if (count < 2) throw DomainError("sample_graph needs count >= 2");
  if (!(lo.sign() > 0 && lo < hi && hi < family.a())) throw DomainError("sample_graph needs 0 < x_lo < x_hi < a");

  GraphSample out;
  out.x_lo = lo;
  out.x_hi = hi;
  out.count = count;
  out.rows.resize(static_cast<size_t>(count));

  auto fill = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      GraphRow row;
      row.x = lo + (hi - lo) * Real(i, digits) / Real(count - 1, digits);
      row.f = family.map(row.x);
      try {
        row.F = F_eval(family, row.x, tol, series);
      } catch (const Error&) {
        row.F.reset();
      }
      out.rows[static_cast<size_t>(i)] = std::move(row);
    }
  };

  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, 16);
  if (workers == 1 || count < 64) {
    fill(0, count);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(count, begin + chunk);
      if (begin < end) pool.emplace_back(fill, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return out;
}

std::string to_csv(const GraphSample& sample) {
  std::ostringstream os;
  os << "x,f_a,F_a\n";
  for (const auto& row : sample.rows) {
    os << row.x.to_string() << ',' << row.f.to_string() << ',' << real_or_empty(row.F) << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const CriticalChain& chain) {
  nlohmann::json out = {
      {"a", chain.a.to_string()},
      {"xi", reals_json(chain.xi)},
      {"eta", reals_json(chain.eta)},
      {"F_xi", reals_json(chain.F_xi)},
      {"asymptote_chain", chain.is_asymptote_chain},
      {"xi_kind", kinds_json(chain.xi_kind)},
      {"eta_kind", kinds_json(chain.eta_kind)},
  };
  out["F_eta"] = chain.F_eta ? reals_json(*chain.F_eta) : nlohmann::json(nullptr);
  return out;
}

nlohmann::json to_json(const AbelSeries& series) {
  nlohmann::json regular = nlohmann::json::array();
  for (const auto& d : series.regular) regular.push_back(formal::to_json(d));
  return {
      {"a", series.a.to_string()},
      {"order", series.order},
      {"normalization", series.normalization == Normalization::Scaled ? "scaled" : "zero-constant"},
      {"principal", series.principal.to_string()},
      {"constant", series.constant.to_string()},
      {"log_coefficient", series.log_coefficient.to_string()},
      {"regular", regular},
      {"max_log_degree", series.max_log_degree},
      {"symbolic_residual", series.symbolic_residual.to_string()},
  };
}

}  // namespace iterlab::abel
