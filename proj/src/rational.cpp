#include "nsw/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace nsw {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  }
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

Rational parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    mpz_class z = parse_integer(exp_text);
    if (!z.fits_slong_p() || abs(z) > 10000) {
      throw std::invalid_argument("decimal exponent out of range");
    }
    exponent = z.get_si();
  }
  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) {
    throw std::invalid_argument("malformed decimal");
  }
  if ((!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw std::invalid_argument("malformed decimal");
  }
  std::string digits = std::string(int_part) + std::string(frac_part);
  mpz_class mantissa(digits, 10);
  exponent -= static_cast<long>(frac_part.size());
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational r = exponent >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

template <typename Float>
Float log_integer(const mpz_class& z) {
  // z > 0. Keep the top 64 bits; the rest only shifts the exponent.
  const size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
  if (bits <= 64) {
    return std::log(static_cast<Float>(mpz_get_ui(z.get_mpz_t())));
  }
  const size_t shift = bits - 64;
  mpz_class top;
  mpz_fdiv_q_2exp(top.get_mpz_t(), z.get_mpz_t(), shift);
  return std::log(static_cast<Float>(mpz_get_ui(top.get_mpz_t()))) +
         static_cast<Float>(shift) * std::log(static_cast<Float>(2));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational rational_from_double(double d) {
  if (!std::isfinite(d)) throw std::invalid_argument("non-finite double");
  Rational r(d);
  r.canonicalize();
  return r;
}

double log_rational(const Rational& r) {
  if (sgn(r) <= 0) throw std::domain_error("log of non-positive rational");
  return log_integer<double>(r.get_num()) - log_integer<double>(r.get_den());
}

long double log_rational_ld(const Rational& r) {
  if (sgn(r) <= 0) throw std::domain_error("log of non-positive rational");
  return log_integer<long double>(r.get_num()) - log_integer<long double>(r.get_den());
}

}  // namespace nsw
