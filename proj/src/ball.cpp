#include "hyperbound/ball.hpp"

#include <stdexcept>

#include "hyperbound/combinatorics.hpp"

namespace hyperbound {

Rational bsize(unsigned long n, long k, const Rational& lambda) {
  if (n < 1) throw std::domain_error("bsize: n must be >= 1");
  if (k < 0) throw std::domain_error("bsize: k must be >= 0");
  if (sgn(lambda) < 0 || cmp(lambda, 1) >= 0)
    throw std::domain_error("bsize: lambda must lie in [0, 1)");
  if (static_cast<unsigned long>(k) > n) return 1;

  BinomialScan scan(n);
  while (scan.index() < static_cast<unsigned long>(k)) scan.step();
  Rational count = Rational(scan.prefix()) + lambda * Rational(scan.current());
  return count / Rational(pow2(n));
}

BallIndex bsize_inv(unsigned long n, const Rational& mu) {
  if (n < 1) throw std::domain_error("bsize_inv: n must be >= 1");
  if (sgn(mu) < 0 || cmp(mu, 1) >= 0)
    throw std::domain_error("bsize_inv: mu must lie in [0, 1)");

  // Find the largest k with sum_{i<k} binom(n,i) <= mu * 2^n, comparing
  // exactly via cross-multiplication: prefix * den <= num * 2^n.
  const mpz_class num = mu.get_num(), den = mu.get_den();
  const mpz_class target = num * pow2(n);  // mu * 2^n, scaled by den
  BinomialScan scan(n);
  while (scan.index() < n) {
    mpz_class next_prefix = scan.prefix() + scan.current();
    if (next_prefix * den > target) break;
    scan.step();
  }
  BallIndex idx;
  idx.k = static_cast<long>(scan.index());
  // lambda = (mu * 2^n - prefix) / binom(n, k), exact.
  idx.lambda = make_fraction(target - scan.prefix() * den,
                             den * scan.current());
  return idx;
}

}  // namespace hyperbound
