// Binary entropy, its inverse on (0, 1/2], and the Hoeffding bound on the
// ball index of a small-volume region.
#pragma once

#include "hyperbound/exact.hpp"

namespace hyperbound {

// H(p) = -p lg p - (1-p) lg(1-p) for rational p in (0, 1).
// Throws std::domain_error at the endpoints.
double entropy(const Rational& p);

// Bracketing interval (lower, upper) = (c/(2 lg(4/c)), c/lg(1/c)) that is
// guaranteed to contain the root of H(p) = c.  Requires 0 < c < 1 (the
// upper expression degenerates at c = 1).
struct EntropyBrackets {
  double lower;
  double upper;
};
EntropyBrackets entropy_solve_brackets(double c);

// Tightened upper bracket c/lg(5.84/c), valid for c <= 0.833.
double entropy_refined_upper(double c);

// The root p in (0, 1/2] of H(p) = c, by bisection to absolute tolerance
// 1e-12.  c = 1 returns exactly 1/2.
double entropy_solve(double c);

// (n - sqrt(-2 ln(mu) * n)) / 2 + 1: Hoeffding's concentration estimate for
// the index of the fractional Hamming ball of volume mu.  The provable
// guarantee is one layer weaker than the formula reads: with
// (k, lambda) = bsize_inv(n, mu), the tail bound applies to the first
// uncompleted layer (mu < bsize(n, k+1, 0) <= exp(-(n-2k)^2 / 2n) for
// k <= n/2), giving k > hoeffding_k_lower(n, mu) - 1.  Comparing against
// the formula itself fails for small n (e.g. n = 1, mu = 1/4 has k = 0).
// Requires 0 < mu <= 1.
double hoeffding_k_lower(unsigned long n, const Rational& mu);

}  // namespace hyperbound
