// Exact adversarial risk and robustness of a monotone-conjunction
// hypothesis/target pair under the three attack definitions, via
// case-profile enumeration, plus a brute-force hypercube oracle.
#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hyperbound/boolean.hpp"
#include "hyperbound/exact.hpp"

namespace hyperbound {

enum class AttackDefinition {
  ErrorRegion,       // success: h(x') != c(x')
  PredictionChange,  // success: h(x') != h(x)
  CorruptedInstance  // success: h(x') != c(x)
};

// Variable-overlap shape of a hypothesis/target pair: m mutual variables,
// u undiscovered (target-only), w wrong (hypothesis-only), inside ambient
// dimension n >= m+u+w.  Both conjunctions must be nonempty:
// |h| = m+w >= 1 and |c| = m+u >= 1.
struct ConjunctionStructure {
  long m = 0, u = 0, w = 0;
  long n = 0;

  long h_size() const { return m + w; }
  long c_size() const { return m + u; }
  bool same() const { return u == 0 && w == 0; }
  bool operator==(const ConjunctionStructure&) const = default;
};

// Validating constructor; n < 0 means "exactly the relevant variables"
// (n = m+u+w).  Throws std::invalid_argument on a malformed shape.
ConjunctionStructure make_structure(long m, long u, long w, long n = -1);

// Falsified-variable counts of one instance: j of the m mutual, zeta of the
// u undiscovered, xi of the w wrong.  Probability weight under U_n is
// binom(m,j) binom(u,zeta) binom(w,xi) / 2^{m+u+w}.
struct CaseProfile {
  long j = 0, zeta = 0, xi = 0;
};

// A minimal perturbation distance; std::nullopt means no adversarial point
// exists at any distance (infinite).
using Distance = std::optional<long>;

// Exact distribution of the per-instance distance, with the mass of
// instances that have no adversarial point kept separate.
struct DistanceDistribution {
  std::map<long, Rational> finite;
  Rational infinite_mass = 0;

  // Finite expectation, or nullopt when any mass is infinite.
  std::optional<Rational> expectation() const;
};

// mu = (2^w + 2^u - 2) / 2^{m+u+w}: the uniform measure of the error
// region {h != c}.  Zero iff h = c.
Rational error_mass(const ConjunctionStructure& s);

// Minimal perturbation distance of any instance with the given profile.
//
// ErrorRegion: 0 when exactly one of h,c is false; 1 when both are true
// (possible since u+w >= 1 unless h = c, which is Infinite everywhere);
// when both are false, the cheaper of
//   A: satisfy h, keep c false   -> j + xi + [zeta == 0], needs zeta>=1 or u>=1
//   B: satisfy c, keep h false   -> j + zeta + [xi == 0], needs xi>=1 or w>=1
// (the bracket pays one extra flip to re-falsify the other conjunction).
//
// PredictionChange: 1 when h is true (falsify any member variable), else
// j + xi flips to satisfy h.
//
// CorruptedInstance: 0 when exactly one is false (h already disagrees with
// the label c(x)); 1 when both true; j + xi when both false.
Distance perturbation_distance(AttackDefinition def,
                               const ConjunctionStructure& s,
                               const CaseProfile& p);

// Aggregates perturbation_distance over all (j, zeta, xi) profiles with
// binomial weights: O(m*u*w) work independent of n.
DistanceDistribution distance_distribution(AttackDefinition def,
                                           const ConjunctionStructure& s);

// Mass of instances at distance <= r.
Rational risk_exact(AttackDefinition def, const ConjunctionStructure& s, long r);

// Expected distance, or nullopt (infinite) — ErrorRegion with h = c.
std::optional<Rational> robustness_exact(AttackDefinition def,
                                         const ConjunctionStructure& s);

// Piecewise theorem lower bound on error-region risk at budget r, for
// h != c (throws std::invalid_argument when h = c):
//   r <= floor(m/2)                   : mu * sum_{j<=r} binom(m,j)
//   .. + floor(min(u,w)/2)            : (1/4) 2^{-min(u,w)} sum_{z=1}^{g} binom(min(u,w),z)
//   .. <= min(|h|,|c|)                : 1/8
//   r >= 1 + min(|h|,|c|)             : 1
// The second bullet is implemented exactly as stated (binomials over
// min(u,w)); conformance tests assert only risk_exact >= this bound.
Rational er_risk_theorem_lb(const ConjunctionStructure& s, long r);

// Interval bounds produced by the theorems; `infinite` marks the h = c
// error-region case where both ends are infinite.
struct RobustnessBounds {
  bool infinite = false;
  Rational lower = 0, upper = 0;
};

// (min(|h|,|c|)/16, 1 + min(|h|,|c|)), or the infinite pair when h = c.
RobustnessBounds er_robustness_theorem_bounds(const ConjunctionStructure& s);

// Prediction-change closed forms: risk 0 at r = 0, else
// 2^{-|h|} sum_{i=0}^{r} binom(|h|,i); robustness |h|/2 + 2^{-|h|}.
Rational pc_risk_formula(long h_size, long r);
Rational pc_robustness_formula(long h_size);

// Corrupted-instance piecewise exact risk:
//   r = 0          : mu
//   1 <= r < w     : 2^{-|c|} + 2^{-|h|} S_h(r) - 2^{-(|h|+u)} S_w(r)
//   w <= r < |h|   : 2^{-|h|} S_h(r)
//   r >= |h|       : 1
// with S_h(r) = sum_{i<=r} binom(|h|,i) and S_w(r) = sum_{i<=r} binom(w,i).
Rational ci_risk_formula(const ConjunctionStructure& s, long r);

// Strict interval (|h|/4, |h| + 1/2) containing the CI robustness.
std::pair<Rational, Rational> ci_robustness_bounds(const ConjunctionStructure& s);

// Overlap shape of two concrete conjunctions inside dimension n.
ConjunctionStructure classify(const Conjunction& h, const Conjunction& c,
                              unsigned n);

// Precomputed masks for turning sampled instances into profiles fast.
struct ProfileMasks {
  std::vector<std::uint64_t> mutual, undiscovered, wrong;

  CaseProfile profile_of(const Instance& x) const {
    return CaseProfile{static_cast<long>(falsified_count(mutual, x)),
                       static_cast<long>(falsified_count(undiscovered, x)),
                       static_cast<long>(falsified_count(wrong, x))};
  }
};
ProfileMasks profile_masks(const Conjunction& h, const Conjunction& c,
                           unsigned n);

// True minimal distance by breadth-first sphere growth around x; requires
// n <= 20 (exhaustive search), throws std::domain_error beyond.
Distance brute_force_distance(AttackDefinition def, const Conjunction& h,
                              const Conjunction& c, const Instance& x);

// Distances for every point of {0,1}^n at once (index = bit pattern),
// via multi-source BFS from the definition's success sets.  n <= 20.
std::vector<Distance> brute_force_all_distances(AttackDefinition def,
                                                const Conjunction& h,
                                                const Conjunction& c,
                                                unsigned n);

}  // namespace hyperbound
