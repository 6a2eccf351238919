#include "hyperbound/tails.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hyperbound/combinatorics.hpp"

namespace hyperbound {

namespace {

// sum_{i=lo}^{hi} weight(i) * binom(n,i) by the multiplicative recurrence,
// starting from one direct binomial evaluation at lo.
template <typename Weight>
mpz_class weighted_layer_sum(unsigned long n, unsigned long lo,
                             unsigned long hi, Weight weight) {
  if (lo > hi) return 0;
  mpz_class b = binomial(n, static_cast<long>(lo));
  mpz_class acc = 0;
  for (unsigned long i = lo;; ++i) {
    mpz_class w = weight(i);
    if (w != 0) acc += w * b;
    if (i == hi) break;
    b *= n - i;
    mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), i + 1);
  }
  return acc;
}

mpz_class layer_sum(unsigned long n, unsigned long lo, unsigned long hi) {
  return weighted_layer_sum(n, lo, hi, [](unsigned long) { return mpz_class(1); });
}

void check_range(unsigned long n, long t) {
  if (n < 1) throw std::domain_error("binomial_tail: n must be >= 1");
  if (t < 0 || static_cast<unsigned long>(t) > n)
    throw std::domain_error("binomial_tail: t must lie in [0, n]");
}

// D's central band for width t: floor((n-t+1)/2) .. floor((n+t-1)/2).
// Empty when t = 0.
std::pair<long, long> d_band(unsigned long n, long t) {
  long a = (static_cast<long>(n) - t + 1) / 2;
  long b = (static_cast<long>(n) + t - 1) / 2;
  return {a, b};
}

}  // namespace

Rational binomial_tail(TailKind kind, unsigned long n, long t) {
  check_range(n, t);
  const unsigned long ut = static_cast<unsigned long>(t);
  const mpz_class denom = pow2(n);
  switch (kind) {
    case TailKind::UpperTail_C:
      return make_fraction(layer_sum(n, ut, n), denom);
    case TailKind::BallMass:
      return make_fraction(layer_sum(n, 0, ut), denom);
    case TailKind::SymmetricComplement_D: {
      auto [a, b] = d_band(n, t);
      if (a > b) return 1;
      return make_fraction(
          denom - layer_sum(n, static_cast<unsigned long>(a),
                            static_cast<unsigned long>(b)),
          denom);
    }
    case TailKind::ExcessExpectation_rho:
      return make_fraction(
          weighted_layer_sum(n, ut, n,
                             [&](unsigned long i) { return mpz_class(i - ut); }),
          denom);
  }
  throw std::logic_error("binomial_tail: unreachable");
}

namespace {

double log_binomial(unsigned long n, unsigned long k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Kahan-compensated sum of weight(i)*exp(log binom(n,i) - n ln 2) over
// i = lo..hi, added in increasing magnitude order (away from i = n/2 first).
template <typename Weight>
double approx_layer_sum(unsigned long n, long lo, long hi, Weight weight) {
  if (lo > hi) return 0.0;
  const double ln2n = static_cast<double>(n) * std::log(2.0);
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(hi - lo + 1));
  for (long i = lo; i <= hi; ++i) {
    double w = weight(i);
    if (w == 0.0) continue;
    terms.push_back(
        w * std::exp(log_binomial(n, static_cast<unsigned long>(i)) - ln2n));
  }
  std::sort(terms.begin(), terms.end());
  double sum = 0.0, comp = 0.0;
  for (double x : terms) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

double binomial_tail_approx(TailKind kind, unsigned long n, long t) {
  check_range(n, t);
  switch (kind) {
    case TailKind::UpperTail_C:
      return approx_layer_sum(n, t, static_cast<long>(n),
                              [](long) { return 1.0; });
    case TailKind::BallMass:
      return approx_layer_sum(n, 0, t, [](long) { return 1.0; });
    case TailKind::SymmetricComplement_D: {
      auto [a, b] = d_band(n, t);
      return 1.0 - approx_layer_sum(n, a, b, [](long) { return 1.0; });
    }
    case TailKind::ExcessExpectation_rho:
      return approx_layer_sum(n, t, static_cast<long>(n), [&](long i) {
        return static_cast<double>(i - t);
      });
  }
  throw std::logic_error("binomial_tail_approx: unreachable");
}

ThresholdCrossing threshold_crossing(TailKind kind, unsigned long n,
                                     const Rational& gamma) {
  if (kind != TailKind::UpperTail_C && kind != TailKind::SymmetricComplement_D)
    throw std::domain_error("threshold_crossing: kind must be C or D");
  if (sgn(gamma) <= 0 || cmp(gamma, 1) >= 0)
    throw std::domain_error("threshold_crossing: gamma must lie in (0, 1)");

  // value(t) for t in [0, n+1]; one step beyond n the remaining mass is 0
  // (empty upper sum for C, full band for D), which closes the bracket for
  // arbitrarily small gamma.
  auto value = [&](long t) -> Rational {
    if (t > static_cast<long>(n)) return 0;
    return binomial_tail(kind, n, t);
  };

  // Largest t in [0, n] with value(t) >= gamma.  value(0) = 1 >= gamma.
  long lo = 0, hi = static_cast<long>(n);
  Rational at_lo = value(0);
  while (lo < hi) {
    long mid = lo + (hi - lo + 1) / 2;
    Rational v = value(mid);
    if (v >= gamma) {
      lo = mid;
      at_lo = v;
    } else {
      hi = mid - 1;
    }
  }
  return ThresholdCrossing{lo, at_lo, value(lo + 1)};
}

}  // namespace hyperbound
