// Exact binomial coefficients and a streaming row scanner used by the tail
// and ball-volume routines.
#pragma once

#include <gmpxx.h>

namespace hyperbound {

// binom(n, k); 0 for k < 0 or k > n.
mpz_class binomial(unsigned long n, long k);

// Walks binom(n, 0), binom(n, 1), ... with the multiplicative recurrence,
// maintaining the running prefix sum.  One pass over a row costs O(n)
// big-int short multiplications instead of n independent binomial calls.
class BinomialScan {
 public:
  explicit BinomialScan(unsigned long n);

  unsigned long n() const { return n_; }
  unsigned long index() const { return i_; }           // current k
  const mpz_class& current() const { return binom_; }  // binom(n, k)
  const mpz_class& prefix() const { return prefix_; }  // sum_{j<k} binom(n, j)

  // Advance to k+1.  Must not be called past k = n.
  void step();

 private:
  unsigned long n_;
  unsigned long i_;
  mpz_class binom_;
  mpz_class prefix_;
};

}  // namespace hyperbound
