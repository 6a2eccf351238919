// Deterministic sampling plumbing and the two conjunction learners:
// specialize-from-positives (Find-S) and tolerance-guided local search
// over bounded-size conjunctions with add/remove/swap moves.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hyperbound/boolean.hpp"
#include "hyperbound/exact.hpp"

namespace hyperbound {

// xoshiro256++ seeded through a splitmix64 chain.  Fixed algorithm, fixed
// constants: identical seeds produce identical streams on every platform.
class Prng {
 public:
  explicit Prng(std::uint64_t seed);

  std::uint64_t next();

  // Unbiased integer in [0, bound) by rejection; bound >= 1.
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  // Independent generator for task (a, b) under one master seed: the seed
  // is folded with golden-ratio multiples of a+1 and b+1 through the
  // splitmix64 finalizer, once per coordinate.
  static Prng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

 private:
  std::array<std::uint64_t, 4> state_;
};

// Uniform point of {0,1}^n: word i of the instance is the (i+1)-th raw
// draw, masked to the top word's n % 64 bits.
Instance sample_uniform(unsigned n, Prng& prng);

// ceil((1/epsilon) * ln((2^n - 1)/delta)): the PAC sample size for the
// conjunction class.  The ceiling is resolved exactly by evaluating the
// expression in interval arithmetic (directed-rounding 256-bit logs,
// doubling precision until both ends agree), so boundary cases like
// 7231.045 -> 7232 cannot be rounded off.  Requires n >= 1 and
// epsilon, delta in (0, 1).
long sample_size(const Rational& epsilon, const Rational& delta, unsigned n);

// One Find-S update: drop from the hypothesis mask every variable the
// positive example falsifies.
void find_s_absorb(std::vector<std::uint64_t>& mask, const Instance& positive);

// The conjunction whose variables are the mask's set bits.
Conjunction conjunction_from_mask(const std::vector<std::uint64_t>& mask,
                                  unsigned n);

// Specialization learner: start from the conjunction of all n variables,
// draw sample_size(epsilon, delta, n) labeled uniform examples, and absorb
// each positive one.  The target's variables are a subset of the result's
// at every step.  Requires a nonempty target.
Conjunction find_s(const Conjunction& target, const Rational& epsilon,
                   const Rational& delta, unsigned n, Prng& prng);

// Size cap q = ceil(log2(3/(2 epsilon))), evaluated exactly by integer
// comparison (smallest q with 2^{q+1} * eps_num >= 3 * eps_den).
long swapping_q(const Rational& epsilon);

struct NeighborhoodSizes {
  long removals = 0;   // |N-|: one per hypothesis variable, when |h| > 0
  long additions = 0;  // |N+|: one per absent variable, when |h| < q
  long swaps = 0;      // |N+-|: remove one, add another, when |h| <= q
};
NeighborhoodSizes swapping_neighborhood_sizes(long k, long n, long q);

// num / 2^exp: error masses of conjunction pairs and the mutator's
// tolerance are all dyadic, so beneficial/neutral classification reduces
// to integer comparisons.
struct Dyadic {
  mpz_class num;
  long exp = 0;
};

// Sign of a - b.
int dyadic_cmp(const Dyadic& a, const Dyadic& b);

// a + sign * 2^{-s}.
Dyadic dyadic_offset(const Dyadic& a, long s, int sign);

// Disagreement mass of a hypothesis/target pair with m mutual, u
// undiscovered, w wrong variables: (2^w + 2^u - 2) / 2^{m+u+w}.  Unlike
// the analysis structure type this accepts m + w = 0 (the empty
// hypothesis the local search starts from).  The mutator's performance
// semantics live entirely in this one function: the +/-1 agreement
// correlation is 1 - 2 * error, so comparing candidate performances
// is comparing these masses with the inequality flipped.
Dyadic conjunction_error_dyadic(long m, long u, long w);

// Local-search learner.  Starts from the empty conjunction and runs the
// mutator for `generations` rounds (>= 1):
//   - build the neighborhoods per the size guards above;
//   - weight singles (N+ u N- u {h}) with total 1/2 split equally, and
//     swaps (N+-) with total 1/2 split equally;
//   - score candidates against the target and classify: beneficial when
//     the score exceeds the hypothesis's by more than the tolerance
//     2^{-2q}, neutral when it is at least the hypothesis's minus the
//     tolerance (weak inequality, so h itself is always neutral);
//   - pick from the beneficial pool if nonempty, else the neutral pool,
//     with probability proportional to weight.
// Scores are evaluated exactly (conjunction_error_dyadic), which meets the
// "within eps_s with confidence 1 - delta_s" contract with zero slack;
// delta is therefore unused but kept for the documented signature.
// Candidates of equal structure are exchangeable, so selection draws a
// weighted structure class first and an in-class index second — one
// below() call per generation — which is distribution-identical to
// enumerating all candidates individually.
Conjunction swapping_run(const Conjunction& target, const Rational& epsilon,
                         const Rational& delta, unsigned n, long generations,
                         Prng& prng);

// Hoeffding-sized empirical +/-1 agreement score between h and c:
// mean over ceil(ln(2/delta_s) / (2 eps_s^2)) uniform samples, within
// eps_s of the true correlation with probability >= 1 - delta_s.  This is
// the sampling estimator the mutator contract describes; the mutator
// itself uses the exact evaluator above, which dominates it.
double perf_estimate(const Conjunction& h, const Conjunction& c,
                     double epsilon_s, double delta_s, unsigned n, Prng& prng);

}  // namespace hyperbound
