#include "hyperbound/learning.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hyperbound {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Prng::Prng(std::uint64_t seed) {
  // splitmix64 expansion of the seed into the 256-bit state.
  std::uint64_t z = seed;
  for (auto& word : state_) {
    z += kGolden;
    word = mix64(z);
  }
  if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 && state_[3] == 0)
    state_[0] = kGolden;  // xoshiro must never sit at the all-zero state
}

std::uint64_t Prng::next() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

std::uint64_t Prng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below(0)");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t v = next();
    if (v >= threshold) return v % bound;
  }
}

double Prng::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Prng Prng::substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = seed;
  z = mix64(z ^ (kGolden * (a + 1)));
  z = mix64(z ^ (kGolden * (b + 1)));
  return Prng(z);
}

Instance sample_uniform(unsigned n, Prng& prng) {
  Instance x = Instance::zeros(n);
  for (auto& word : x.words) word = prng.next();
  if (n % 64 != 0 && !x.words.empty())
    x.words.back() &= (std::uint64_t{1} << (n % 64)) - 1;
  return x;
}

long sample_size(const Rational& epsilon, const Rational& delta, unsigned n) {
  if (n < 1) throw std::invalid_argument("dimension must be at least 1");
  if (!(epsilon > 0 && epsilon < 1 && delta > 0 && delta < 1))
    throw std::invalid_argument("epsilon and delta must lie in (0, 1)");
  const Rational arg = Rational(pow2(n) - 1) / delta;  // > 1, so ln > 0
  const Rational inv_eps = 1 / epsilon;
  for (mpfr_prec_t prec = 256; prec <= 4096; prec *= 2) {
    mpfr_t lo, hi;
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    mpfr_set_q(lo, arg.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi, arg.get_mpq_t(), MPFR_RNDU);
    mpfr_log(lo, lo, MPFR_RNDD);
    mpfr_log(hi, hi, MPFR_RNDU);
    mpfr_mul_q(lo, lo, inv_eps.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi, hi, inv_eps.get_mpq_t(), MPFR_RNDU);
    mpz_class ceil_lo, ceil_hi;
    mpfr_get_z(ceil_lo.get_mpz_t(), lo, MPFR_RNDU);
    mpfr_get_z(ceil_hi.get_mpz_t(), hi, MPFR_RNDU);
    mpfr_clear(lo);
    mpfr_clear(hi);
    if (ceil_lo == ceil_hi) return ceil_lo.get_si();
  }
  // The value is an irrational multiple of a rational, never an exact
  // integer, so the interval always separates from the ceiling eventually.
  throw std::logic_error("sample-size ceiling did not stabilize");
}

void find_s_absorb(std::vector<std::uint64_t>& mask, const Instance& positive) {
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] &= positive.words[i];
}

Conjunction conjunction_from_mask(const std::vector<std::uint64_t>& mask,
                                  unsigned n) {
  Conjunction h;
  for (unsigned i = 0; i < n; ++i)
    if ((mask[i / 64] >> (i % 64)) & 1u) h.vars.push_back(i);
  return h;
}

Conjunction find_s(const Conjunction& target, const Rational& epsilon,
                   const Rational& delta, unsigned n, Prng& prng) {
  if (target.size() == 0)
    throw std::invalid_argument("target must be nonempty");
  const long samples = sample_size(epsilon, delta, n);
  std::vector<std::uint64_t> mask((n + 63) / 64, ~std::uint64_t{0});
  if (n % 64 != 0) mask.back() = (std::uint64_t{1} << (n % 64)) - 1;
  for (long i = 0; i < samples; ++i) {
    const Instance x = sample_uniform(n, prng);
    if (target.satisfied_by(x)) find_s_absorb(mask, x);
  }
  return conjunction_from_mask(mask, n);
}

long swapping_q(const Rational& epsilon) {
  if (!(epsilon > 0 && epsilon < 1))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  const mpz_class num = epsilon.get_num(), den = epsilon.get_den();
  long q = 0;
  while (pow2(static_cast<unsigned long>(q + 1)) * num < 3 * den) ++q;
  return q;
}

NeighborhoodSizes swapping_neighborhood_sizes(long k, long n, long q) {
  if (k < 0 || n < 1 || k > n || q < 1)
    throw std::invalid_argument("bad neighborhood parameters");
  NeighborhoodSizes sizes;
  if (k > 0) sizes.removals = k;
  if (k < q) sizes.additions = n - k;
  if (k <= q) sizes.swaps = k * (n - k);
  return sizes;
}

int dyadic_cmp(const Dyadic& a, const Dyadic& b) {
  const long scale = std::max(a.exp, b.exp);
  const mpz_class lhs = a.num << static_cast<unsigned long>(scale - a.exp);
  const mpz_class rhs = b.num << static_cast<unsigned long>(scale - b.exp);
  return cmp(lhs, rhs);
}

Dyadic dyadic_offset(const Dyadic& a, long s, int sign) {
  const long scale = std::max(a.exp, s);
  Dyadic out;
  out.exp = scale;
  out.num = (a.num << static_cast<unsigned long>(scale - a.exp)) +
            sign * (mpz_class(1) << static_cast<unsigned long>(scale - s));
  return out;
}

Dyadic conjunction_error_dyadic(long m, long u, long w) {
  if (m < 0 || u < 0 || w < 0)
    throw std::invalid_argument("negative variable count");
  Dyadic d;
  d.num = pow2(static_cast<unsigned long>(w)) +
          pow2(static_cast<unsigned long>(u)) - 2;
  d.exp = m + u + w;
  return d;
}

namespace {

// The mutator's candidate moves, grouped by structural effect.  All
// candidates inside one group produce the same (m, u, w) and carry the
// same weight, so they are exchangeable; selection picks a group first
// and an in-group index second.  Enumeration order within a group is the
// sorted order of the variable pools, and the group order is this enum's.
enum MoveType : int {
  kKeep = 0,        // h itself
  kRmMutual,        // N-: drop a variable shared with the target
  kRmWrong,         // N-: drop a variable absent from the target
  kAddUndisc,       // N+: add a target variable
  kAddOther,        // N+: add a variable outside h u c
  kSwapMutualUndisc,  // N+-: mutual -> undiscovered
  kSwapMutualOther,   // N+-: mutual -> outside
  kSwapWrongUndisc,   // N+-: wrong -> undiscovered
  kSwapWrongOther,    // N+-: wrong -> outside
  kMoveTypes
};

struct VariablePools {
  // Sorted, disjoint; hypothesis = mutual u wrong, target = mutual u undisc.
  std::vector<unsigned> mutual, wrong, undisc, other;
};

void sorted_insert(std::vector<unsigned>& pool, unsigned v) {
  pool.insert(std::upper_bound(pool.begin(), pool.end(), v), v);
}

unsigned take_at(std::vector<unsigned>& pool, long index) {
  const unsigned v = pool[static_cast<std::size_t>(index)];
  pool.erase(pool.begin() + index);
  return v;
}

enum Class : int { kOut = 0, kNeutral = 1, kBeneficial = 2 };

}  // namespace

Conjunction swapping_run(const Conjunction& target, const Rational& epsilon,
                         const Rational& delta, unsigned n, long generations,
                         Prng& prng) {
  if (target.size() == 0)
    throw std::invalid_argument("target must be nonempty");
  if (generations < 1)
    throw std::invalid_argument("generations must be at least 1");
  (void)delta;  // subsumed by exact scoring; see header
  const long q = swapping_q(epsilon);
  const long tol_exp = 2 * q + 1;  // tolerance 2^{-2q} on the +/-1
                                   // performance scale is 2^{-(2q+1)} on
                                   // the error-mass scale

  VariablePools pools;
  pools.undisc.assign(target.vars.begin(), target.vars.end());
  for (unsigned v = 0; v < n; ++v)
    if (!std::binary_search(target.vars.begin(), target.vars.end(), v))
      pools.other.push_back(v);

  for (long gen = 0; gen < generations; ++gen) {
    const long m = static_cast<long>(pools.mutual.size());
    const long w = static_cast<long>(pools.wrong.size());
    const long u = static_cast<long>(pools.undisc.size());
    const long o = static_cast<long>(pools.other.size());
    const long k = m + w;

    const Dyadic err_h = conjunction_error_dyadic(m, u, w);
    const Dyadic bene_cut = dyadic_offset(err_h, tol_exp, -1);
    const Dyadic neutral_cut = dyadic_offset(err_h, tol_exp, +1);

    // Structure reached by each move type (kKeep handled separately).
    const long effect[kMoveTypes][3] = {
        {m, u, w},          {m - 1, u + 1, w}, {m, u, w - 1},
        {m + 1, u - 1, w},  {m, u, w + 1},     {m, u, w},
        {m - 1, u + 1, w + 1}, {m + 1, u - 1, w - 1}, {m, u, w},
    };
    long count[kMoveTypes] = {
        1,
        k > 0 ? m : 0,
        k > 0 ? w : 0,
        k < q ? u : 0,
        k < q ? o : 0,
        m * u,
        m * o,
        w * u,
        w * o,
    };
    int cls[kMoveTypes] = {};
    for (int t = 0; t < kMoveTypes; ++t) {
      if (count[t] == 0) {
        cls[t] = kOut;
        continue;
      }
      if (t == kKeep) {
        cls[t] = kNeutral;  // weak neutral inequality always holds for h
        continue;
      }
      const Dyadic err =
          conjunction_error_dyadic(effect[t][0], effect[t][1], effect[t][2]);
      if (dyadic_cmp(err, bene_cut) < 0)
        cls[t] = kBeneficial;
      else if (dyadic_cmp(err, neutral_cut) <= 0)
        cls[t] = kNeutral;
      else
        cls[t] = kOut;
    }

    // Relative weights: every single candidate (N+ u N- u {h}) carries
    // 1/(2 * singles), every swap candidate 1/(2 * swaps); clearing the
    // denominators, a single weighs `swaps` units and a swap `singles`.
    const NeighborhoodSizes sizes = swapping_neighborhood_sizes(k, n, q);
    const long singles_total = sizes.removals + sizes.additions + 1;
    const long swaps_total = sizes.swaps;

    const int wanted = [&] {
      for (int t = 0; t < kMoveTypes; ++t)
        if (cls[t] == kBeneficial) return kBeneficial;
      return kNeutral;
    }();
    long single_count = 0, swap_count = 0;
    for (int t = 0; t < kMoveTypes; ++t) {
      if (cls[t] != wanted) continue;
      (t <= kAddOther ? single_count : swap_count) += count[t];
    }

    // Pick a candidate class-proportionally, then locate its move type by
    // walking the fixed type order.
    bool pick_single;
    long index;
    if (swap_count == 0) {
      pick_single = true;
      index = static_cast<long>(prng.below(static_cast<std::uint64_t>(single_count)));
    } else if (single_count == 0) {
      pick_single = false;
      index = static_cast<long>(prng.below(static_cast<std::uint64_t>(swap_count)));
    } else {
      const std::uint64_t single_units =
          static_cast<std::uint64_t>(single_count) *
          static_cast<std::uint64_t>(swaps_total);
      const std::uint64_t swap_units =
          static_cast<std::uint64_t>(swap_count) *
          static_cast<std::uint64_t>(singles_total);
      const std::uint64_t r = prng.below(single_units + swap_units);
      pick_single = r < single_units;
      index = pick_single
                  ? static_cast<long>(r / static_cast<std::uint64_t>(swaps_total))
                  : static_cast<long>((r - single_units) /
                                      static_cast<std::uint64_t>(singles_total));
    }

    int chosen = -1;
    for (int t = pick_single ? 0 : kSwapMutualUndisc; t < kMoveTypes; ++t) {
      if (pick_single && t > kAddOther) break;
      if (cls[t] != wanted) continue;
      if (index < count[t]) {
        chosen = t;
        break;
      }
      index -= count[t];
    }

    switch (chosen) {
      case kKeep:
        break;
      case kRmMutual:
        sorted_insert(pools.undisc, take_at(pools.mutual, index));
        break;
      case kRmWrong:
        sorted_insert(pools.other, take_at(pools.wrong, index));
        break;
      case kAddUndisc:
        sorted_insert(pools.mutual, take_at(pools.undisc, index));
        break;
      case kAddOther:
        sorted_insert(pools.wrong, take_at(pools.other, index));
        break;
      case kSwapMutualUndisc: {
        const unsigned rm = take_at(pools.mutual, index / u);
        const unsigned add = take_at(pools.undisc, index % u);
        sorted_insert(pools.undisc, rm);
        sorted_insert(pools.mutual, add);
        break;
      }
      case kSwapMutualOther: {
        const unsigned rm = take_at(pools.mutual, index / o);
        const unsigned add = take_at(pools.other, index % o);
        sorted_insert(pools.undisc, rm);
        sorted_insert(pools.wrong, add);
        break;
      }
      case kSwapWrongUndisc: {
        const unsigned rm = take_at(pools.wrong, index / u);
        const unsigned add = take_at(pools.undisc, index % u);
        sorted_insert(pools.other, rm);
        sorted_insert(pools.mutual, add);
        break;
      }
      case kSwapWrongOther: {
        const unsigned rm = take_at(pools.wrong, index / o);
        const unsigned add = take_at(pools.other, index % o);
        sorted_insert(pools.other, rm);
        sorted_insert(pools.wrong, add);
        break;
      }
      default:
        throw std::logic_error("candidate selection fell off the type walk");
    }
  }

  Conjunction h;
  h.vars.resize(pools.mutual.size() + pools.wrong.size());
  std::merge(pools.mutual.begin(), pools.mutual.end(), pools.wrong.begin(),
             pools.wrong.end(), h.vars.begin());
  return h;
}

double perf_estimate(const Conjunction& h, const Conjunction& c,
                     double epsilon_s, double delta_s, unsigned n,
                     Prng& prng) {
  if (!(epsilon_s > 0) || !(delta_s > 0 && delta_s < 1))
    throw std::invalid_argument("bad accuracy parameters");
  const double raw = std::ceil(std::log(2.0 / delta_s) /
                               (2.0 * epsilon_s * epsilon_s));
  const long samples = std::max(1L, static_cast<long>(raw));
  long score = 0;
  for (long i = 0; i < samples; ++i) {
    const Instance x = sample_uniform(n, prng);
    score += h.satisfied_by(x) == c.satisfied_by(x) ? 1 : -1;
  }
  return static_cast<double>(score) / static_cast<double>(samples);
}

}  // namespace hyperbound
