// Fractional Hamming-ball volumes: the normalized count of a ball that
// contains every point up to radius k-1 plus a lambda-fraction of the
// radius-k layer, and the inverse map from a volume to its ball index.
#pragma once

#include "hyperbound/exact.hpp"

namespace hyperbound {

// Index of a fractional ball: full layers 0..k-1 plus fraction lambda
// (0 <= lambda < 1) of layer k.
struct BallIndex {
  long k = 0;
  Rational lambda = 0;

  bool operator==(const BallIndex&) const = default;
};

// Volume 2^{-n} * (sum_{i<k} binom(n,i) + lambda * binom(n,k)).
// Caps at exactly 1 for k > n (the ball already fills the cube).
// Throws std::domain_error for k < 0 or lambda outside [0, 1).
Rational bsize(unsigned long n, long k, const Rational& lambda);

// The unique (k, lambda) with bsize(n, k, lambda) == mu.  Every rational
// mu in [0, 1) has an exact preimage (lambda absorbs the sub-layer part).
// Throws std::domain_error when mu is outside [0, 1).
BallIndex bsize_inv(unsigned long n, const Rational& mu);

}  // namespace hyperbound
