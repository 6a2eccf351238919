#include "hyperbound/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperbound {

double entropy(const Rational& p) {
  if (sgn(p) <= 0 || cmp(p, 1) >= 0)
    throw std::domain_error("entropy: p must lie strictly in (0, 1)");
  const double lg_p = ln_rational(p) / std::log(2.0);
  const double lg_q = ln_rational(Rational(1) - p) / std::log(2.0);
  const double pd = mpq_get_d(p.get_mpq_t());
  return -pd * lg_p - (1.0 - pd) * lg_q;
}

EntropyBrackets entropy_solve_brackets(double c) {
  if (!(c > 0.0 && c < 1.0))
    throw std::domain_error("entropy_solve_brackets: c must lie in (0, 1)");
  return {c / (2.0 * std::log2(4.0 / c)), c / std::log2(1.0 / c)};
}

double entropy_refined_upper(double c) {
  if (!(c > 0.0 && c <= 0.833))
    throw std::domain_error("entropy_refined_upper: valid for 0 < c <= 0.833");
  return c / std::log2(5.84 / c);
}

namespace {

double entropy_d(double p) {
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace

double entropy_solve(double c) {
  if (!(c > 0.0 && c <= 1.0))
    throw std::domain_error("entropy_solve: c must lie in (0, 1]");
  if (c == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (entropy_d(mid) < c)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double hoeffding_k_lower(unsigned long n, const Rational& mu) {
  if (sgn(mu) <= 0 || cmp(mu, 1) > 0)
    throw std::domain_error("hoeffding_k_lower: mu must lie in (0, 1]");
  const double nd = static_cast<double>(n);
  return (nd - std::sqrt(-2.0 * ln_rational(mu) * nd)) / 2.0 + 1.0;
}

}  // namespace hyperbound
