#include "iterlab/real.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <regex>

#include "iterlab/errors.hpp"

namespace iterlab {

namespace {

constexpr double kLog2Of10 = 3.32192809488736234787;

int max_digits(const Real& a, const Real& b) { return std::max(a.digits(), b.digits()); }

std::string render(mpfr_srcptr x, size_t significant) {
  if (mpfr_nan_p(x)) return "nan";
  if (mpfr_inf_p(x)) return mpfr_sgn(x) < 0 ? "-inf" : "inf";
  if (mpfr_zero_p(x)) return "0.0E+00";
  mpfr_exp_t exponent = 0;
  char* raw = mpfr_get_str(nullptr, &exponent, 10, significant, x, MPFR_RNDN);
  std::string mantissa(raw);
  mpfr_free_str(raw);

  std::string out;
  if (!mantissa.empty() && mantissa.front() == '-') {
    out.push_back('-');
    mantissa.erase(mantissa.begin());
  }
  // Trailing zeros carry no information in the round-trip form.
  while (mantissa.size() > 2 && mantissa.back() == '0') mantissa.pop_back();
  out.push_back(mantissa.front());
  out.push_back('.');
  out.append(mantissa.size() > 1 ? mantissa.substr(1) : std::string("0"));
  const long e = static_cast<long>(exponent) - 1;
  out.push_back('E');
  out.push_back(e < 0 ? '-' : '+');
  std::string digits = std::to_string(std::labs(e));
  if (digits.size() < 2) digits.insert(digits.begin(), '0');
  out += digits;
  return out;
}

}  // namespace

mpfr_prec_t digits_to_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * kLog2Of10)) + 8;
}

Real::Real(Uninit, int digits) : digits_(std::max(digits, kMinDigits)) {
  mpfr_init2(value_, digits_to_bits(digits_));
}

Real::Real(long value, int digits) : digits_(std::max(digits, kMinDigits)) {
  const unsigned long magnitude = value < 0 ? 0UL - static_cast<unsigned long>(value) : static_cast<unsigned long>(value);
  const mpfr_prec_t needed = magnitude == 0 ? 1 : static_cast<mpfr_prec_t>(std::bit_width(magnitude));
  mpfr_init2(value_, std::max(digits_to_bits(digits_), needed));
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(const Real& other) : digits_(other.digits_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : digits_(other.digits_) {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
    digits_ = other.digits_;
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  std::swap(digits_, other.digits_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::from_decimal(std::string_view text, int digits) {
  static const std::regex kDecimal(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
  std::string s(text);
  if (!std::regex_match(s, kDecimal)) {
    throw ParseError("malformed decimal string: '" + s + "'");
  }
  if (digits < kMinDigits) {
    throw DomainError("precision must be at least " + std::to_string(kMinDigits) + " digits");
  }
  Real out(Uninit{}, digits);
  mpfr_set_str(out.value_, s.c_str(), 10, MPFR_RNDN);
  return out;
}

Real Real::pi(int digits) {
  Real out(Uninit{}, digits);
  mpfr_const_pi(out.value_, MPFR_RNDN);
  return out;
}

Real Real::pow10(long exponent, int digits) {
  Real out(Uninit{}, digits);
  mpfr_ui_pow_ui(out.value_, 10, static_cast<unsigned long>(std::labs(exponent)), MPFR_RNDN);
  if (exponent < 0) mpfr_ui_div(out.value_, 1, out.value_, MPFR_RNDN);
  return out;
}

Real Real::with_digits(int digits) const {
  Real out(Uninit{}, digits);
  mpfr_set(out.value_, value_, MPFR_RNDN);
  return out;
}

std::string Real::to_string() const { return render(value_, 0); }

std::string Real::to_string(int significant) const {
  return render(value_, static_cast<size_t>(std::max(significant, 2)));
}

double Real::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

std::string Real::round_to_integer_string() const {
  mpz_t z;
  mpz_init(z);
  mpfr_get_z(z, value_, MPFR_RNDN);
  char* raw = mpz_get_str(nullptr, 10, z);
  std::string out(raw);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(raw, out.size() + 1);
  mpz_clear(z);
  return out;
}

int Real::sign() const noexcept { return mpfr_sgn(value_); }

Real Real::operator-() const {
  Real out(Uninit{}, digits_);
  mpfr_set_prec(out.value_, mpfr_get_prec(value_));
  mpfr_neg(out.value_, value_, MPFR_RNDN);
  return out;
}

Real& Real::operator+=(const Real& rhs) { return *this = *this + rhs; }
Real& Real::operator-=(const Real& rhs) { return *this = *this - rhs; }
Real& Real::operator*=(const Real& rhs) { return *this = *this * rhs; }
Real& Real::operator/=(const Real& rhs) { return *this = *this / rhs; }

Real operator+(const Real& a, const Real& b) {
  Real out(Real::Uninit{}, max_digits(a, b));
  mpfr_set_prec(out.value_, std::max(mpfr_get_prec(a.value_), mpfr_get_prec(b.value_)));
  mpfr_add(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

Real operator-(const Real& a, const Real& b) {
  Real out(Real::Uninit{}, max_digits(a, b));
  mpfr_set_prec(out.value_, std::max(mpfr_get_prec(a.value_), mpfr_get_prec(b.value_)));
  mpfr_sub(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

Real operator*(const Real& a, const Real& b) {
  Real out(Real::Uninit{}, max_digits(a, b));
  mpfr_set_prec(out.value_, std::max(mpfr_get_prec(a.value_), mpfr_get_prec(b.value_)));
  mpfr_mul(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

Real operator/(const Real& a, const Real& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  Real out(Real::Uninit{}, max_digits(a, b));
  mpfr_set_prec(out.value_, std::max(mpfr_get_prec(a.value_), mpfr_get_prec(b.value_)));
  mpfr_div(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

Real sqrt(const Real& x) {
  if (x.sign() < 0) throw DomainError("sqrt of negative number");
  Real out(Real::Uninit{}, x.digits_);
  mpfr_set_prec(out.value_, mpfr_get_prec(x.value_));
  mpfr_sqrt(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real log(const Real& x) {
  if (x.sign() <= 0) throw DomainError("log of nonpositive number");
  Real out(Real::Uninit{}, x.digits_);
  mpfr_set_prec(out.value_, mpfr_get_prec(x.value_));
  mpfr_log(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real exp(const Real& x) {
  Real out(Real::Uninit{}, x.digits_);
  mpfr_set_prec(out.value_, mpfr_get_prec(x.value_));
  mpfr_exp(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real abs(const Real& x) {
  Real out(Real::Uninit{}, x.digits_);
  mpfr_set_prec(out.value_, mpfr_get_prec(x.value_));
  mpfr_abs(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real pow(const Real& x, long n) {
  if (n < 0 && x.is_zero()) throw DomainError("negative power of zero");
  Real out(Real::Uninit{}, x.digits_);
  mpfr_set_prec(out.value_, mpfr_get_prec(x.value_));
  mpfr_pow_si(out.value_, x.value_, n, MPFR_RNDN);
  return out;
}

Real round(const Real& x) {
  Real out(Real::Uninit{}, x.digits_);
  mpfr_set_prec(out.value_, std::max(mpfr_get_prec(x.value_), mpfr_prec_t{64}));
  mpfr_round(out.value_, x.value_);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(); }

bool near(const Real& a, const Real& b, const Real& tol) { return abs(a - b) <= tol; }

}  // namespace iterlab
