// Exact rational plumbing shared by every module: canonical fraction
// construction, power-of-two scaling, decimal parsing and rendering.
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hyperbound {

// A probability is an mpq_class constrained to [0,1]. Modules that promise
// the constraint assert it with is_probability at their boundaries.
using Rational = mpq_class;

bool is_probability(const Rational& v);

// num/den as a canonical rational. den must be nonzero.
Rational make_fraction(const mpz_class& num, const mpz_class& den);

// 2^e for e >= 0.
mpz_class pow2(unsigned long e);

// Parse "123", "0.25", "-1.5", or "p/q" into an exact rational.
// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

// Render v with `sig_digits` significant digits, ties to even.  Trailing
// zeros in the fractional part are dropped only when the shortened string
// still equals v exactly, so "5.00000" prints as "5" but a rounded value
// keeps its full significant width (e.g. "0.00990080").
std::string render_decimal(const Rational& v, int sig_digits = 6);

// First `frac_digits` digits after the decimal point of v >= 0, truncated
// (never rounded): the digits of floor(v * 10^frac_digits) zero-padded on
// the left.  This is what equality-to-printed-digits checks compare against.
std::string truncated_fraction_digits(const Rational& v, int frac_digits);

// floor(v) as an integer (works for negative v too).
mpz_class floor_to_int(const Rational& v);

// Natural log of v > 0 as a double.  Evaluated in extended precision so
// rationals far outside double range (e.g. 2^{-100000}) still give the
// correct logarithm instead of -inf.
double ln_rational(const Rational& v);

}  // namespace hyperbound
