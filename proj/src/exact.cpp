#include "hyperbound/exact.hpp"

#include <mpfr.h>

#include <cctype>
#include <stdexcept>

namespace hyperbound {

bool is_probability(const Rational& v) {
  return sgn(v) >= 0 && cmp(v, 1) <= 0;
}

double ln_rational(const Rational& v) {
  if (sgn(v) <= 0) throw std::domain_error("ln_rational: v must be positive");
  mpfr_t x;
  mpfr_init2(x, 128);
  mpfr_set_q(x, v.get_mpq_t(), MPFR_RNDN);
  mpfr_log(x, x, MPFR_RNDN);
  double out = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return out;
}

Rational make_fraction(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::invalid_argument("make_fraction: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

mpz_class pow2(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

mpz_class floor_to_int(const Rational& v) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = (s[0] == '-');
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("parse_rational: empty input");

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view p = s.substr(0, slash), q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q))
      throw std::invalid_argument("parse_rational: malformed fraction '" +
                                  std::string(text) + "'");
    mpz_class num(std::string(p), 10), den(std::string(q), 10);
    value = make_fraction(num, den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (!fp.empty() && !all_digits(fp)))
      throw std::invalid_argument("parse_rational: malformed decimal '" +
                                  std::string(text) + "'");
    mpz_class num(std::string(ip) + std::string(fp), 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    value = make_fraction(num, den);
  } else {
    if (!all_digits(s))
      throw std::invalid_argument("parse_rational: malformed integer '" +
                                  std::string(text) + "'");
    value = Rational(mpz_class(std::string(s), 10));
  }
  if (negative) value = -value;
  return value;
}

namespace {

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

// Round num/den to the nearest integer, ties to even.
mpz_class round_half_even(const mpz_class& num, const mpz_class& den) {
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  mpz_class twice = 2 * r;
  int c = cmp(twice, den);
  if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
  return q;
}

}  // namespace

std::string render_decimal(const Rational& v, int sig_digits) {
  if (sig_digits < 1) throw std::invalid_argument("render_decimal: sig_digits < 1");
  Rational a = v;
  a.canonicalize();  // exact-equality checks below assume reduced form
  if (a == 0) return "0";
  bool negative = sgn(a) < 0;
  if (negative) a = -a;

  // Decimal exponent e with 10^e <= a < 10^{e+1}.
  long e;
  mpz_class ip = floor_to_int(a);
  if (ip > 0) {
    e = static_cast<long>(mpz_sizeinbase(ip.get_mpz_t(), 10)) - 1;
    // sizeinbase may overestimate by one.
    if (ip < pow10(static_cast<unsigned long>(e))) --e;
  } else {
    mpz_class num = a.get_num(), den = a.get_den();
    long j = 0;
    while (num < den) {
      num *= 10;
      ++j;
    }
    e = -j;
  }

  long shift = sig_digits - 1 - e;
  mpz_class num = a.get_num(), den = a.get_den();
  if (shift >= 0)
    num *= pow10(static_cast<unsigned long>(shift));
  else
    den *= pow10(static_cast<unsigned long>(-shift));
  mpz_class d = round_half_even(num, den);
  if (d == pow10(static_cast<unsigned long>(sig_digits))) {
    d = pow10(static_cast<unsigned long>(sig_digits - 1));
    ++e;
  }

  std::string digits = d.get_str();
  std::string out;
  if (e >= sig_digits - 1) {
    out = digits + std::string(static_cast<size_t>(e - sig_digits + 1), '0');
  } else if (e >= 0) {
    out = digits.substr(0, static_cast<size_t>(e + 1)) + "." +
          digits.substr(static_cast<size_t>(e + 1));
  } else {
    out = "0." + std::string(static_cast<size_t>(-e - 1), '0') + digits;
  }

  // Drop trailing fractional zeros only while the shorter string still
  // parses back to exactly v.
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') {
      std::string shorter = out.substr(0, out.size() - 1);
      std::string for_parse = shorter.back() == '.'
                                  ? shorter.substr(0, shorter.size() - 1)
                                  : shorter;
      if (parse_rational(for_parse) != a) break;
      out = shorter;
    }
    if (out.back() == '.') out.pop_back();
  }
  return negative ? "-" + out : out;
}

std::string truncated_fraction_digits(const Rational& v, int frac_digits) {
  if (sgn(v) < 0)
    throw std::invalid_argument("truncated_fraction_digits: negative value");
  if (frac_digits < 1)
    throw std::invalid_argument("truncated_fraction_digits: frac_digits < 1");
  Rational frac = v - Rational(floor_to_int(v));
  mpz_class scaled =
      floor_to_int(Rational(frac * Rational(pow10(static_cast<unsigned long>(frac_digits)))));
  std::string s = scaled.get_str();
  if (s.size() < static_cast<size_t>(frac_digits))
    s = std::string(static_cast<size_t>(frac_digits) - s.size(), '0') + s;
  return s;
}

}  // namespace hyperbound
