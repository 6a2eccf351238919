// Classifier-agnostic bounds for error-region adversarial risk and
// robustness over the uniform distribution on {0,1}^n: boundary-size lower
// bounds, the budget-r risk lower bound and its inversion, the exact
// robustness upper bound, and the closed-form / asymptotic companions.
#pragma once

#include <string>
#include <vector>

#include "hyperbound/ball.hpp"
#include "hyperbound/exact.hpp"

namespace hyperbound {

// Lower bound on the internal vertex boundary of any region of volume vol:
// with (k, lambda) = bsize_inv(vol),
//   |IB(A)| >= binom(n,k-1) + lambda * (binom(n,k) - binom(n,k-1)).
// internal_boundary_lb floors the rational bound to an integer count;
// the _exact variant returns the rational itself.  Requires 0 < vol < 1.
mpz_class internal_boundary_lb(unsigned long n, const Rational& vol);
Rational internal_boundary_lb_exact(unsigned long n, const Rational& vol);

// Lower bound on the external vertex boundary:
//   |EB(A)| >= binom(n,k) + lambda * (binom(n,k+1) - binom(n,k)).
// Derivation: if b(.) lower-bounds internal boundaries, then for
// A' = A u EB(A) we have IB(A') subseteq EB(A) (an internal boundary point
// of A' inside A would have all neighbors in A'), so |EB(A)| >= b(vol(A'))
// minimized over the feasible vol(A') >= vol(A) + b(vol(A')); monotonicity
// of the ball bound lands that infimum one layer above the internal one.
Rational external_boundary_lb(unsigned long n, const Rational& vol);

// Lower bound on adversarial risk under budget r for any classifier pair
// with error mass mu: bsize(n, k+r, lambda) where (k,lambda)=bsize_inv(mu),
// capping at 1 once k+r exceeds n.  Requires 0 < mu < 1, r >= 0.
Rational risk_lower_bound(unsigned long n, const Rational& mu, long r);

// Smallest r with risk_lower_bound(n, mu, r) >= target.  Requires
// mu <= target <= 1 (target == mu gives 0).  Implemented as one continued
// pass of the binomial prefix recurrence (each candidate r extends the
// previous prefix by one layer), so the whole search costs a single row scan.
long min_budget(unsigned long n, const Rational& mu, const Rational& target);

// Exact upper bound on error-region robustness:
//   sum_{r=0}^{n-k+1} (1 - bsize(n, k+r, lambda)).
// Evaluated in one scan by accumulating suffix masses.  0 < mu < 1.
Rational robustness_ub_exact(unsigned long n, const Rational& mu);

// Closed-form budget sufficient to push risk mu up to mu_prime:
//   sqrt(-n ln(mu)/2) + sqrt(-n ln(1-mu_prime)/2),
// except that the half target mu_prime = 1/2 needs only the first addend.
// Requires 0 < mu <= 1/2 <= mu_prime <= 1.
double budget_closed_form(unsigned long n, const Rational& mu,
                          const Rational& mu_prime);

// n -> infinity coefficient of sqrt(n) for the same budget:
//   (Phi^{-1}(mu_prime) - Phi^{-1}(mu)) / 2.
double budget_asymptotic(const Rational& mu, const Rational& mu_prime);

// Closed-form robustness upper bound sqrt(-n ln(mu)/2) + mu*sqrt(n/2),
// for 0 < mu <= 1/2.
double robustness_ub_closed(unsigned long n, const Rational& mu);

// Asymptotic robustness coefficient of sqrt(n).  The first addend is
// Phi^{-1}(1-mu)/2: the limiting ball index sits at k ~ n/2 +
// Phi^{-1}(mu) sqrt(n)/2, so the distance to the equator is
// (n/2 - k) = -Phi^{-1}(mu) sqrt(n)/2 = Phi^{-1}(1-mu) sqrt(n)/2, which is
// positive for mu < 1/2.  Second addend mu*sqrt(pi/8).
double robustness_ub_asymptotic(const Rational& mu);

enum class BoundKind { Exact, ClosedFormAllN, Asymptotic };

// One bound value: exact entries live in `exact`, the floating kinds in
// `real`.  `quantity` is one of "budget_to_0.99", "budget_to_0.50",
// "robustness".
struct BoundEntry {
  std::string quantity;
  BoundKind kind;
  Rational exact;  // meaningful only when kind == Exact
  double real;     // meaningful otherwise
};

struct BoundReport {
  unsigned long n;
  Rational mu;
  BallIndex ball;
  std::vector<BoundEntry> entries;
};

// The reference table at mu = 1/100: budgets to reach risk 0.99 and 0.50
// and the robustness bound, each in exact / closed-form / asymptotic form.
// Requires every n >= 100.
std::vector<BoundReport> table1_generate(const std::vector<unsigned long>& n_list);

}  // namespace hyperbound
