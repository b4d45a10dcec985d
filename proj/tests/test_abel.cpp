#include <doctest.h>

#include <random>

#include "iterlab/abel.hpp"
#include "iterlab/errors.hpp"

using iterlab::Real;
namespace abel = iterlab::abel;

namespace {

constexpr int D = 50;

Real dec(const char* s) { return Real::from_decimal(s, D); }
Real sqrt3() { return sqrt(Real(3, D)); }
Real tol() { return Real::pow10(-30, D); }
bool within(const Real& a, const Real& b, int exponent) { return abs(a - b) < Real::pow10(exponent, D); }

}  // namespace

TEST_CASE("family basics") {
  for (const char* as : {"1", "1.5", "1.8", "2"}) {
    const abel::CubicFamily fam(dec(as), D);
    CHECK(fam.map(Real(0, D)).is_zero());
    CHECK(within(fam.map(fam.a()), fam.a(), -45));
    for (int i = 1; i < 50; ++i) {
      const Real x = fam.a() * Real(i) / Real(50);
      const Real y = fam.map(x);
      REQUIRE(y.sign() >= (std::string(as) == "2" ? 0 : 1));  // f_2(1) = 0
      REQUIRE(y < x);
    }
  }
  CHECK_THROWS_AS(abel::CubicFamily(dec("2.1"), D), iterlab::DomainError);
  CHECK_THROWS_AS(abel::CubicFamily(dec("0.9"), D), iterlab::DomainError);
  CHECK(abel::CubicFamily(dec("2"), D).has_asymptotes());
  CHECK(abel::CubicFamily(sqrt3(), D).is_degenerate());
}

TEST_CASE("critical pairs") {
  auto [x, y] = abel::critical_pair(sqrt3());
  CHECK(within(x, dec("0.577350269189"), -11));
  CHECK(x == y);
  std::tie(x, y) = abel::critical_pair(dec("1.8"));
  CHECK(within(x, dec("0.436700683814"), -11));
  CHECK(within(y, dec("0.763299316185"), -11));
  std::tie(x, y) = abel::critical_pair(dec("1.9"));
  CHECK(within(x, dec("0.372991677469"), -11));
  CHECK(within(y, dec("0.893674989196"), -11));
  std::tie(x, y) = abel::critical_pair(dec("2"));
  CHECK(within(x, Real(1, D) / Real(3), -45));
  CHECK(within(y, Real(1, D), -45));
  CHECK_THROWS_AS(abel::critical_pair(dec("1.5")), iterlab::DomainError);
}

TEST_CASE("Abel series") {
  const auto s2 = abel::derive_abel_series(dec("2"), 12, D);
  CHECK(within(s2.principal, dec("0.5"), -45));
  CHECK(within(s2.log_coefficient, dec("0.75"), -45));
  CHECK(s2.max_log_degree == 0);
  // exact values from an independent rational derivation
  CHECK(within(s2.regular[0].coefficient(0), dec("0.625"), -45));
  CHECK(within(s2.regular[1].coefficient(0), dec("0.65625"), -45));
  CHECK(within(s2.regular[2].coefficient(0), dec("1.09375"), -45));
  CHECK(within(s2.regular[3].coefficient(0), Real(2717, D) / Real(1280), -45));
  CHECK(within(s2.regular[4].coefficient(0), Real(13429, D) / Real(3200), -45));

  const auto s3 = abel::derive_abel_series(sqrt3(), 12, D);
  CHECK(within(s3.log_coefficient, Real(2, D) / Real(3), -45));
  CHECK(within(s3.principal, Real(1, D) / sqrt3(), -45));

  const auto s95 = abel::derive_abel_series(dec("1.8"), 12, D);
  CHECK(s95.numeric_residual(Real::pow10(-3, D)) < Real::pow10(-30, D));
  CHECK(s95.symbolic_residual < Real::pow10(-40, D));
}

TEST_CASE("log term lowers the residual by one order") {
  const Real a = dec("1.5");
  auto s = abel::derive_abel_series(a, 4, D);
  const Real y = Real::pow10(-4, D);
  s.regular.clear();
  const Real with_log = s.numeric_residual(y);
  s.log_coefficient = Real(0, D);
  const Real without_log = s.numeric_residual(y);
  CHECK(without_log > Real::pow10(-5, D));
  CHECK(with_log < Real::pow10(-7, D));
}

TEST_CASE("normalizations differ by c log a") {
  const Real a = dec("1.9");
  const abel::CubicFamily fam(a, D);
  const auto scaled = abel::derive_abel_series(a, 16, D);
  const auto zero = abel::derive_abel_series(a, 16, D, abel::Normalization::ZeroConstant);
  CHECK(zero.constant.is_zero());
  const Real x = dec("0.5");
  CHECK(within(abel::F_eval(fam, x, tol(), scaled) - abel::F_eval(fam, x, tol(), zero),
               scaled.log_coefficient * log(a), -30));
}

TEST_CASE("printed F values") {
  struct Point {
    const char* a;
    const char* x;
    const char* F;
  };
  const Point pts[] = {
      {"sqrt3", "0.577350269189626", "1.354567323982"},
      {"1.8", "1.286564033401", "0.446679716680"},
      {"2", "0.333333333333333", "1.574672245867"},
  };
  for (const auto& p : pts) {
    const Real a = std::string(p.a) == "sqrt3" ? sqrt3() : dec(p.a);
    const abel::CubicFamily fam(a, D);
    const auto s = abel::derive_abel_series(a, 16, D);
    INFO("a = " << p.a);
    CHECK(within(abel::F_eval(fam, dec(p.x), tol(), s), dec(p.F), -9));
  }
}

TEST_CASE("inverse branch") {
  const abel::CubicFamily f95(dec("1.8"), D);
  CHECK(within(abel::inverse_branch(f95, dec("0.436700683814")), dec("1.286564033401"), -11));
  const abel::CubicFamily f2(dec("2"), D);
  CHECK(within(abel::inverse_branch(f2, Real(1, D)), dec("1.754877666246"), -11));
  for (int i = 1; i < 20; ++i) {
    const Real x = dec("0.8") + Real(i, D) / Real(20) * dec("0.95");
    const Real back = abel::inverse_branch(f95, f95.map(x));
    CHECK(within(f95.map(back), f95.map(x), -44));
  }
  CHECK_THROWS_AS(abel::inverse_branch(f95, dec("0.1")), iterlab::DomainError);
  CHECK_THROWS_AS(abel::inverse_branch(f95, dec("1.9")), iterlab::DomainError);
}

TEST_CASE("critical chains") {
  const abel::CubicFamily fam(dec("1.9"), D);
  const auto s = abel::derive_abel_series(fam.a(), 16, D);
  const auto ch = abel::critical_chain(fam, 3, s, tol());
  REQUIRE(ch.xi.size() == 4);
  REQUIRE(ch.F_eta);
  CHECK(within(ch.eta[0], dec("0.893674989196"), -11));
  CHECK(within((*ch.F_eta)[0], dec("3.626360576962"), -9));
  CHECK(within(ch.xi[2], dec("1.771547833683"), -11));
  CHECK(within(ch.F_xi[2], dec("-0.475792486641"), -9));
  for (size_t k = 0; k + 1 < ch.xi.size(); ++k) {
    CHECK(ch.xi[k] < ch.xi[k + 1]);
    CHECK(ch.xi[k + 1] < fam.a());
    CHECK(within(fam.map(ch.xi[k + 1]), ch.xi[k], -40));
    CHECK(within(ch.F_xi[k] - ch.F_xi[k + 1], Real(1, D), -29));
    CHECK(within((*ch.F_eta)[k] - (*ch.F_eta)[k + 1], Real(1, D), -29));
  }
  CHECK(ch.xi_kind[0] == abel::CriticalKind::Minimum);
  CHECK(ch.eta_kind[0] == abel::CriticalKind::Maximum);

  const abel::CubicFamily f2(dec("2"), D);
  const auto c2 = abel::critical_chain(f2, 2, abel::derive_abel_series(f2.a(), 16, D), tol());
  CHECK(c2.is_asymptote_chain);
  CHECK_FALSE(c2.F_eta);
  CHECK(within(c2.eta[2], dec("1.948914407000"), -11));

  const abel::CubicFamily f3(sqrt3(), D);
  const auto c3 = abel::critical_chain(f3, 1, abel::derive_abel_series(f3.a(), 16, D), tol());
  CHECK(c3.xi_kind[0] == abel::CriticalKind::Flat);
}

TEST_CASE("asymptote hits for a = 2") {
  const abel::CubicFamily f2(dec("2"), D);
  const auto s = abel::derive_abel_series(f2.a(), 16, D);
  CHECK_THROWS_AS(abel::F_eval(f2, Real(1, D), tol(), s), abel::AsymptoteHit);
  CHECK_THROWS_AS(abel::F_eval(f2, f2.asymptote_chain()[3], tol(), s), abel::AsymptoteHit);
  CHECK_NOTHROW(abel::F_eval(f2, dec("0.9"), tol(), s));
}

TEST_CASE("functional equation on random points") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<Real> as = {dec("1.2"), dec("1.5"), sqrt3(), dec("1.8"), dec("1.9")};
  for (const Real& a : as) {
    const abel::CubicFamily fam(a, D);
    const auto s = abel::derive_abel_series(a, 16, D);
    for (int i = 0; i < 20; ++i) {
      const Real x = dec("0.05") + (a - dec("0.1")) * Real::from_decimal(std::to_string(u(rng)), D);
      const Real lhs = abel::F_eval(fam, fam.map(x), tol(), s, nullptr, 5 + i) - abel::F_eval(fam, x, tol(), s);
      REQUIRE(abs(lhs - Real(1)) < Real(10) * tol());
    }
  }
}

TEST_CASE("stopping point and order independence") {
  const abel::CubicFamily fam(dec("1.8"), D);
  const auto s16 = abel::derive_abel_series(fam.a(), 16, D);
  const auto s20 = abel::derive_abel_series(fam.a(), 20, D);
  for (const char* xs : {"0.1", "0.7", "1.5"}) {
    const Real x = dec(xs);
    const Real a = abel::F_eval(fam, x, tol(), s16);
    abel::EvalStats st1, st2;
    const Real b = abel::F_eval(fam, x, tol() / Real(100), s16, &st2);
    abel::F_eval(fam, x, tol(), s16, &st1);
    CHECK(abs(a - b) < tol());
    CHECK(st2.iterations >= st1.iterations);
    CHECK(abs(a - abel::F_eval(fam, x, tol(), s20)) < tol());
    abel::EvalStats st3;
    CHECK(abs(a - abel::F_eval(fam, x, tol(), s16, &st3, 500)) < tol());
    CHECK(st3.iterations == st1.iterations + 500);
  }
}

TEST_CASE("graph samples") {
  const abel::CubicFamily f15(dec("1.5"), D);
  const auto s15 = abel::derive_abel_series(f15.a(), 16, D);
  const auto g = abel::sample_graph(f15, dec("0.05"), dec("1.45"), 60, s15, tol());
  REQUIRE(g.rows.size() == 60);
  for (size_t i = 0; i + 1 < g.rows.size(); ++i) {
    CHECK(g.rows[i].x < g.rows[i + 1].x);
    REQUIRE(g.rows[i].F);
    CHECK(*g.rows[i + 1].F < *g.rows[i].F);
  }

  const abel::CubicFamily f19(dec("1.9"), D);
  const auto s19 = abel::derive_abel_series(f19.a(), 16, D);
  const auto h = abel::sample_graph(f19, dec("0.3"), dec("1.0"), 71, s19, tol());
  std::vector<Real> turns;
  for (size_t i = 1; i + 1 < h.rows.size(); ++i) {
    const int s1 = (*h.rows[i].F - *h.rows[i - 1].F).sign();
    const int s2 = (*h.rows[i + 1].F - *h.rows[i].F).sign();
    if (s1 != s2) turns.push_back(h.rows[i].x);
  }
  REQUIRE(turns.size() == 2);
  CHECK(abs(turns[0] - dec("0.372")) <= dec("0.01"));
  CHECK(abs(turns[1] - dec("0.893")) <= dec("0.01"));

  const std::string csv = abel::to_csv(g);
  CHECK(csv.rfind("x,f_a,F_a\n", 0) == 0);
  CHECK(abel::to_csv(g) == csv);
}

TEST_CASE("a = 2 grid marks asymptote points with empty F") {
  const abel::CubicFamily f2(dec("2"), D);
  const auto s = abel::derive_abel_series(f2.a(), 16, D);
  const auto g = abel::sample_graph(f2, dec("0.5"), dec("1.5"), 11, s, tol());
  CHECK_FALSE(g.rows[5].F);  // x = 1
  CHECK(g.rows[4].F);
  CHECK(abel::to_csv(g).find(",\n") != std::string::npos);
}
