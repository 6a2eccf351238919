#include "hyperbound/combinatorics.hpp"

#include <stdexcept>

namespace hyperbound {

mpz_class binomial(unsigned long n, long k) {
  if (k < 0 || static_cast<unsigned long>(k) > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, static_cast<unsigned long>(k));
  return r;
}

BinomialScan::BinomialScan(unsigned long n) : n_(n), i_(0), binom_(1), prefix_(0) {}

void BinomialScan::step() {
  if (i_ >= n_) throw std::logic_error("BinomialScan: stepped past k = n");
  prefix_ += binom_;
  // binom(n, k+1) = binom(n, k) * (n - k) / (k + 1), always exact.
  binom_ *= n_ - i_;
  mpz_divexact_ui(binom_.get_mpz_t(), binom_.get_mpz_t(), i_ + 1);
  ++i_;
}

}  // namespace hyperbound
