#include "iterlab/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

#include "iterlab/abel.hpp"
#include "iterlab/cf_rates.hpp"
#include "iterlab/errors.hpp"
#include "iterlab/formal/rational.hpp"
#include "iterlab/translated.hpp"

namespace iterlab::cli {

namespace {

constexpr int kCfDigits = 60;
constexpr int kAbelDigits = 50;
constexpr int kTranslatedDigits = 120;
constexpr int kSeriesOrder = 13;

// Thrown for invalid combinations found after CLI11 parsing.
struct Usage : Error {
  using Error::Error;
};

struct Options {
  std::string out_path;
  std::string format;
  std::optional<int> digits;
  std::string tol;

  // cf
  int m = 0;
  bool recognize = true;
  int bound = 200;

  // abel
  std::string a;
  int order = 16;
  std::optional<int> chain;
  std::string sample;
  std::string normalization = "scaled";

  // translated / series
  std::string x0 = "2";
  long N = 1000000;
  int t_order = kSeriesOrder;
  std::string derivatives = "fd,forward,product,series";
  std::string epsilon = "1E-20";
};

int default_digits(int fallback) {
  if (const char* env = std::getenv("ITERLAB_DIGITS")) {
    try {
      const int value = std::stoi(env);
      if (value >= Real::kMinDigits) return value;
    } catch (const std::exception&) {
    }
  }
  return fallback;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

Real tolerance_for(const Options& o, int digits) {
  if (o.tol.empty()) return Real::pow10(10 - digits, digits);
  Real tol = parse_number(o.tol, digits);
  if (tol.sign() <= 0) throw Usage("--tol must be positive");
  return tol;
}

std::string cmd_cf(const Options& o) {
  if (o.m < 1) throw Usage("--m must be a positive integer");
  const int digits = o.digits.value_or(default_digits(kCfDigits));
  if (digits < Real::kMinDigits) throw Usage("--digits must be at least 10");
  const Real tol = tolerance_for(o, digits);
  const cf::RateResult r = cf::convergence_constants(o.m, digits, tol, o.recognize, o.bound);
  if (o.format == "text") {
    std::ostringstream os;
    os << "m        " << r.params.m << "\nrho      " << r.params.rho.to_string(digits) << "\nL_u      "
       << r.L_u.to_string(digits) << "\nL_v      " << r.L_v.to_string(digits) << "\niterations " << r.iterations
       << "\n";
    return os.str();
  }
  return dump(cf::to_json(r));
}

struct GridSpec {
  Real lo, hi;
  int count = 0;
};

GridSpec parse_grid(const std::string& text, int digits) {
  static const std::regex kGrid(R"(^([^:]+):([^:]+):(\d+)$)");
  std::smatch m;
  if (!std::regex_match(text, m, kGrid)) throw Usage("--sample expects lo:hi:count");
  GridSpec g{parse_number(m[1].str(), digits), parse_number(m[2].str(), digits), std::stoi(m[3].str())};
  if (g.count < 2) throw Usage("--sample count must be at least 2");
  return g;
}

std::string cmd_abel(const Options& o) {
  const int digits = o.digits.value_or(default_digits(kAbelDigits));
  if (digits < 30) throw Usage("abel needs --digits >= 30");
  if (o.a.empty()) throw Usage("--a is required");
  const Real a = parse_number(o.a, digits);
  const Real eps = Real::pow10(5 - digits, digits);
  if (a < Real(1) - eps || a > Real(2) + eps) throw Usage("--a must lie in [1, 2]");
  if (o.order < 1) throw Usage("--order must be positive");
  if (!o.chain && o.sample.empty()) throw Usage("abel needs --chain and/or --sample");
  if (o.chain && *o.chain < 0) throw Usage("--chain must be nonnegative");
  abel::Normalization norm = abel::Normalization::Scaled;
  if (o.normalization == "zero") {
    norm = abel::Normalization::ZeroConstant;
  } else if (o.normalization != "scaled") {
    throw Usage("--normalization must be scaled or zero");
  }
  const Real tol = tolerance_for(o, digits);

  const abel::CubicFamily family(a, digits);
  const abel::AbelSeries series = abel::derive_abel_series(a, o.order, digits, norm);

  std::optional<abel::GraphSample> graph;
  if (!o.sample.empty()) {
    const GridSpec g = parse_grid(o.sample, digits);
    if (!(g.lo.sign() > 0 && g.lo < g.hi && g.hi < family.a())) throw Usage("--sample needs 0 < lo < hi < a");
    graph = abel::sample_graph(family, g.lo, g.hi, g.count, series, tol);
  }
  const std::string format = o.format.empty() ? (o.chain ? "json" : "csv") : o.format;
  if (format == "csv") {
    if (!graph) throw Usage("--format csv needs --sample");
    return abel::to_csv(*graph);
  }
  if (format != "json") throw Usage("abel supports --format json or csv");

  nlohmann::json out;
  if (o.chain) {
    if (family.a() * family.a() < Real(3) - eps) throw Usage("--chain needs a >= sqrt(3)");
    out = abel::to_json(abel::critical_chain(family, *o.chain, series, tol));
  } else {
    out["a"] = family.a().to_string();
  }
  out["order"] = o.order;
  out["digits"] = digits;
  out["tolerance"] = tol.to_string();
  out["series"] = abel::to_json(series);
  if (graph) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : graph->rows) {
      rows.push_back({row.x.to_string(), row.f.to_string(),
                      row.F ? nlohmann::json(row.F->to_string()) : nlohmann::json(nullptr)});
    }
    out["graph"] = {{"columns", {"x", "f_a", "F_a"}}, {"rows", rows}};
  }
  return dump(out);
}

translated::DerivativeSelection parse_selection(const std::string& text) {
  translated::DerivativeSelection sel{false, false, false, false};
  if (text.empty() || text == "none") return sel;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "fd") {
      sel.fd = true;
    } else if (item == "forward") {
      sel.forward = true;
    } else if (item == "product") {
      sel.product = true;
    } else if (item == "series") {
      sel.series = true;
    } else {
      throw Usage("unknown derivative method '" + item + "' (fd, forward, product, series)");
    }
  }
  return sel;
}

std::string cmd_translated(const Options& o) {
  const int digits = o.digits.value_or(default_digits(kTranslatedDigits));
  if (digits < 30) throw Usage("translated needs --digits >= 30");
  if (o.N < 1) throw Usage("--N must be at least 1");
  if (o.t_order < 1 || o.t_order > 40) throw Usage("--order must lie in [1, 40]");
  const Real x0 = parse_number(o.x0, digits);
  if (x0 < Real(2)) throw Usage("--x0 must be at least 2 (the product formula needs x0 > 2^(1/3))");
  const Real epsilon = parse_number(o.epsilon, digits);
  if (epsilon.sign() <= 0) throw Usage("--epsilon must be positive");
  const translated::DerivativeSelection sel = parse_selection(o.derivatives);
  const translated::ExpansionTable table = translated::derive_expansion(o.t_order);
  const translated::DerivativeReport report =
      translated::derivative_report(x0, o.N, o.t_order, digits, epsilon, sel, table);
  return dump(translated::to_json(report));
}

std::string cmd_series(const Options& o) {
  if (o.t_order < 1 || o.t_order > 40) throw Usage("--order must lie in [1, 40]");
  const translated::ExpansionTable table = translated::derive_expansion(o.t_order);
  const std::string format = o.format.empty() ? "latex" : o.format;
  if (format == "latex") return translated::to_latex(table);
  if (format == "json") return dump(translated::to_json(table));
  if (format == "text") {
    std::ostringstream os;
    for (int k = 1; k <= table.order; ++k) os << "P_" << k << " = " << table.at(k).to_string() << "\n";
    return os.str();
  }
  throw Usage("series supports --format latex, json or text");
}

}  // namespace

Real parse_number(const std::string& text, int digits) {
  static const std::regex kSqrt(R"(^sqrt\(?(\d+)\)?$)");
  static const std::regex kFraction(R"(^([+-]?\d+)/(\d+)$)");
  std::smatch m;
  if (std::regex_match(text, m, kSqrt)) return sqrt(Real::from_decimal(m[1].str(), digits));
  if (std::regex_match(text, m, kFraction)) {
    return formal::Rational::parse(text).to_real(digits);
  }
  return Real::from_decimal(text, digits);
}

CommandResult run(const std::vector<std::string>& args) {
  CLI::App app{"High-precision laboratory for iterated maps and recurrences", "iterlab"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--digits", o.digits, "working precision in decimal digits");
    sub->add_option("--tol", o.tol, "absolute tolerance (default 10^(10-digits))");
    sub->add_option("--out", o.out_path, "write the report to FILE instead of stdout");
    sub->add_option("--format", o.format, "json | csv | text | latex");
  };

  CLI::App* cf = app.add_subcommand("cf", "convergence-rate constants of x_k = m + 1/x_{k-1}");
  add_common(cf);
  cf->add_option("--m", o.m, "partial quotient m >= 1")->required();
  cf->add_flag("--recognize,!--no-recognize", o.recognize, "recognize p + q rho closed forms (default on)");
  cf->add_option("--bound", o.bound, "recognition search bound");

  CLI::App* abel = app.add_subcommand("abel", "Abel function of f_a(x) = x - a x^2 + x^3");
  add_common(abel);
  abel->add_option("--a", o.a, "parameter in [1, 2]: decimal, p/q or sqrt3")->required();
  abel->add_option("--order", o.order, "Abel series truncation order");
  abel->add_option("--chain", o.chain, "critical chain length k_max");
  abel->add_option("--sample", o.sample, "graph grid lo:hi:count");
  abel->add_option("--normalization", o.normalization, "additive constant: scaled (default) or zero");

  CLI::App* tr = app.add_subcommand("translated", "C(x0) and its derivatives for x_{n+1} = x_n + 1 + 1/x_n^2");
  add_common(tr);
  tr->add_option("--x0", o.x0, "starting value");
  tr->add_option("--N", o.N, "iteration count");
  tr->add_option("--order", o.t_order, "expansion order K");
  tr->add_option("--derivatives", o.derivatives, "comma list of fd, forward, product, series (or none)");
  tr->add_option("--epsilon", o.epsilon, "finite-difference step");

  CLI::App* series = app.add_subcommand("series", "asymptotic expansion table of the translated recurrence");
  series->add_option("--order", o.t_order, "expansion order K");
  series->add_option("--format", o.format, "latex | json | text");
  series->add_option("--out", o.out_path, "write to FILE instead of stdout");

  CommandResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.out = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = kUsage;
    result.err = std::string("error: ") + e.what() + "\n" + app.help();
    return result;
  }

  try {
    std::string report;
    if (cf->parsed()) {
      report = cmd_cf(o);
    } else if (abel->parsed()) {
      report = cmd_abel(o);
    } else if (tr->parsed()) {
      report = cmd_translated(o);
    } else {
      report = cmd_series(o);
    }
    if (!o.out_path.empty()) {
      std::ofstream file(o.out_path, std::ios::binary);
      if (!file) throw Usage("cannot open --out file " + o.out_path);
      file << report;
    } else {
      result.out = std::move(report);
    }
  } catch (const Usage& e) {
    result.exit_code = kUsage;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const ParseError& e) {
    result.exit_code = kUsage;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const PrecisionError& e) {
    result.exit_code = kNumericFailure;
    result.err = std::string("precision error: ") + e.what();
    if (e.required_digits() > 0) result.err += " (try --digits " + std::to_string(e.required_digits()) + ")";
    result.err += "\n";
  } catch (const Error& e) {
    result.exit_code = kNumericFailure;
    result.err = std::string("error: ") + e.what() + "\n";
  }
  return result;
}

}  // namespace iterlab::cli
