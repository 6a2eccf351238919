// Binomial(n, 1/2) tail quantities over the hypercube and the threshold
// solver that locates where a tail crosses a target probability.
#pragma once

#include "hyperbound/exact.hpp"

namespace hyperbound {

enum class TailKind {
  UpperTail_C,            // C(t,n)   = 2^{-n} sum_{i=t}^{n} binom(n,i)
  SymmetricComplement_D,  // D(t,n)   = 1 - 2^{-n} sum over the central band
  BallMass,               // Ball(t,n)= 2^{-n} sum_{i=0}^{t} binom(n,i)
  ExcessExpectation_rho,  // rho(t,n) = 2^{-n} sum_{i=t}^{n} (i-t) binom(n,i)
};

// Exact value of the selected tail quantity for 0 <= t <= n.
//
// D uses the width-t central band with floor-divided limits,
//   D(t,n) = 1 - 2^{-n} sum_{i=floor((n-t+1)/2)}^{floor((n+t-1)/2)} binom(n,i),
// which is the symmetric two-sided complement when (n+t) is odd and removes
// a band of exactly t layers for either parity.  (The published reference
// tables for D include even-parity rows, so the parity restriction is not
// enforced; the floor-limit form reproduces every tabulated value.)
//
// rho is an expectation, not a probability: it may exceed 1.
// Throws std::domain_error when t is outside [0, n].
Rational binomial_tail(TailKind kind, unsigned long n, long t);

// Floating-point evaluation in log space for dimensions where the exact
// big-integer pass is too expensive (intended for n > 2*10^5).  Terms are
// accumulated from the smallest magnitude upward with compensated summation;
// each term exp(lgamma-based log) carries relative error O(eps * ln n), so
// the absolute error is bounded by ~n * 1e-14 ulp-equivalents — under 1e-9
// for n up to 10^7.  The exact routine remains the default everywhere.
double binomial_tail_approx(TailKind kind, unsigned long n, long t);

struct ThresholdCrossing {
  long t;
  Rational value_at_t;         // >= gamma
  Rational value_at_t_plus_1;  // < gamma (0 beyond t = n)
};

// The unique t with value(t) >= gamma > value(t+1), located by binary search
// with exact comparisons.  Only the monotone kinds C and D are accepted.
// Both bracketing values are returned so either rounding convention of
// "the threshold where the tail reaches gamma" can be recovered.
// Throws std::domain_error for other kinds or gamma outside (0, 1).
ThresholdCrossing threshold_crossing(TailKind kind, unsigned long n,
                                     const Rational& gamma);

}  // namespace hyperbound
