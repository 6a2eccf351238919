#include "hyperbound/conjunction.hpp"

#include <algorithm>
#include <stdexcept>

#include "hyperbound/combinatorics.hpp"

namespace hyperbound {

namespace {

void check_profile(const ConjunctionStructure& s, const CaseProfile& p) {
  if (p.j < 0 || p.zeta < 0 || p.xi < 0 || p.j > s.m || p.zeta > s.u ||
      p.xi > s.w)
    throw std::invalid_argument("case profile outside structure");
}

Rational layer_sum(long n, long r) {
  // sum_{i=0}^{min(r,n)} binom(n,i)
  mpz_class total = 0;
  BinomialScan scan(static_cast<unsigned long>(n));
  for (long i = 0; i <= std::min(r, n); ++i) {
    total += scan.current();
    if (i < n) scan.step();
  }
  return Rational(total);
}

}  // namespace

ConjunctionStructure make_structure(long m, long u, long w, long n) {
  if (m < 0 || u < 0 || w < 0)
    throw std::invalid_argument("negative variable count");
  if (m + w < 1) throw std::invalid_argument("hypothesis must be nonempty");
  if (m + u < 1) throw std::invalid_argument("target must be nonempty");
  if (n < 0) n = m + u + w;
  if (n < m + u + w)
    throw std::invalid_argument("dimension smaller than variable count");
  return ConjunctionStructure{m, u, w, n};
}

std::optional<Rational> DistanceDistribution::expectation() const {
  if (infinite_mass > 0) return std::nullopt;
  Rational total = 0;
  for (const auto& [d, mass] : finite) total += Rational(d) * mass;
  return total;
}

Rational error_mass(const ConjunctionStructure& s) {
  mpz_class num = pow2(static_cast<unsigned long>(s.w)) +
                  pow2(static_cast<unsigned long>(s.u)) - 2;
  return make_fraction(num, pow2(static_cast<unsigned long>(s.m + s.u + s.w)));
}

Distance perturbation_distance(AttackDefinition def,
                               const ConjunctionStructure& s,
                               const CaseProfile& p) {
  check_profile(s, p);
  const bool h_false = p.j + p.xi >= 1;
  const bool c_false = p.j + p.zeta >= 1;

  switch (def) {
    case AttackDefinition::ErrorRegion: {
      if (s.same()) return std::nullopt;  // error region is empty
      if (h_false != c_false) return 0;
      if (!h_false) return 1;  // flip one symmetric-difference variable
      // Both false: either satisfy h while keeping c false, or the mirror
      // image; the +1 pays for re-falsifying when nothing is left false.
      std::optional<long> best;
      if (p.zeta >= 1 || s.u >= 1) {
        best = p.j + p.xi + (p.zeta == 0 ? 1 : 0);
      }
      if (p.xi >= 1 || s.w >= 1) {
        long alt = p.j + p.zeta + (p.xi == 0 ? 1 : 0);
        if (!best || alt < *best) best = alt;
      }
      return best;  // h != c guarantees at least one branch was viable
    }
    case AttackDefinition::PredictionChange:
      // A satisfied hypothesis is broken by falsifying any one member
      // variable; an unsatisfied one needs its j + xi zeros restored.
      return h_false ? p.j + p.xi : 1;
    case AttackDefinition::CorruptedInstance:
      if (h_false != c_false) return 0;
      if (!h_false) return 1;        // falsify one hypothesis variable
      return p.j + p.xi;             // satisfy h against the stale label
  }
  throw std::logic_error("unreachable attack definition");
}

DistanceDistribution distance_distribution(AttackDefinition def,
                                           const ConjunctionStructure& s) {
  DistanceDistribution dd;
  const mpz_class den = pow2(static_cast<unsigned long>(s.m + s.u + s.w));
  for (long j = 0; j <= s.m; ++j) {
    const mpz_class bj = binomial(static_cast<unsigned long>(s.m), j);
    for (long z = 0; z <= s.u; ++z) {
      const mpz_class bz = bj * binomial(static_cast<unsigned long>(s.u), z);
      for (long x = 0; x <= s.w; ++x) {
        const mpz_class count =
            bz * binomial(static_cast<unsigned long>(s.w), x);
        const Rational mass = make_fraction(count, den);
        Distance d = perturbation_distance(def, s, CaseProfile{j, z, x});
        if (d)
          dd.finite[*d] += mass;
        else
          dd.infinite_mass += mass;
      }
    }
  }
  return dd;
}

Rational risk_exact(AttackDefinition def, const ConjunctionStructure& s,
                    long r) {
  if (r < 0) throw std::invalid_argument("negative budget");
  DistanceDistribution dd = distance_distribution(def, s);
  Rational total = 0;
  for (const auto& [d, mass] : dd.finite) {
    if (d > r) break;
    total += mass;
  }
  return total;
}

std::optional<Rational> robustness_exact(AttackDefinition def,
                                         const ConjunctionStructure& s) {
  return distance_distribution(def, s).expectation();
}

Rational er_risk_theorem_lb(const ConjunctionStructure& s, long r) {
  if (s.same())
    throw std::invalid_argument("error-region bound requires h != c");
  if (r < 0) throw std::invalid_argument("negative budget");
  const long mn = std::min(s.u, s.w);
  const long half_m = s.m / 2;
  const long half_mn = mn / 2;
  const long cap = std::min(s.h_size(), s.c_size());
  if (r <= half_m) return error_mass(s) * layer_sum(s.m, r);
  if (r <= half_m + half_mn) {
    const long g = r - half_m;
    mpz_class sum = 0;
    BinomialScan scan(static_cast<unsigned long>(mn));
    for (long z = 0; z <= g; ++z) {
      if (z >= 1) sum += scan.current();
      if (z < mn) scan.step();
    }
    return Rational(1, 4) *
           make_fraction(sum, pow2(static_cast<unsigned long>(mn)));
  }
  if (r <= cap) return Rational(1, 8);
  return 1;
}

RobustnessBounds er_robustness_theorem_bounds(const ConjunctionStructure& s) {
  if (s.same()) return RobustnessBounds{true, 0, 0};
  const long mn = std::min(s.h_size(), s.c_size());
  return RobustnessBounds{false, make_fraction(mn, 16), Rational(1 + mn)};
}

Rational pc_risk_formula(long h_size, long r) {
  if (h_size < 1) throw std::invalid_argument("hypothesis must be nonempty");
  if (r < 0) throw std::invalid_argument("negative budget");
  if (r == 0) return 0;
  return layer_sum(h_size, r) /
         Rational(pow2(static_cast<unsigned long>(h_size)));
}

Rational pc_robustness_formula(long h_size) {
  if (h_size < 1) throw std::invalid_argument("hypothesis must be nonempty");
  return make_fraction(h_size, 2) +
         make_fraction(1, pow2(static_cast<unsigned long>(h_size)));
}

Rational ci_risk_formula(const ConjunctionStructure& s, long r) {
  if (r < 0) throw std::invalid_argument("negative budget");
  if (r == 0) return error_mass(s);
  const long hs = s.h_size();
  if (r >= hs) return 1;
  const Rational inv_h = make_fraction(1, pow2(static_cast<unsigned long>(hs)));
  if (r < s.w) {
    const Rational inv_c =
        make_fraction(1, pow2(static_cast<unsigned long>(s.c_size())));
    const Rational inv_hu =
        make_fraction(1, pow2(static_cast<unsigned long>(hs + s.u)));
    return inv_c + inv_h * layer_sum(hs, r) - inv_hu * layer_sum(s.w, r);
  }
  return inv_h * layer_sum(hs, r);
}

std::pair<Rational, Rational> ci_robustness_bounds(
    const ConjunctionStructure& s) {
  const long hs = s.h_size();
  return {make_fraction(hs, 4), Rational(hs) + make_fraction(1, 2)};
}

ConjunctionStructure classify(const Conjunction& h, const Conjunction& c,
                              unsigned n) {
  std::vector<unsigned> shared;
  std::set_intersection(h.vars.begin(), h.vars.end(), c.vars.begin(),
                        c.vars.end(), std::back_inserter(shared));
  const long m = static_cast<long>(shared.size());
  const long u = static_cast<long>(c.size()) - m;
  const long w = static_cast<long>(h.size()) - m;
  return make_structure(m, u, w, static_cast<long>(n));
}

ProfileMasks profile_masks(const Conjunction& h, const Conjunction& c,
                           unsigned n) {
  ProfileMasks pm;
  const std::size_t words = (n + 63) / 64;
  pm.mutual.assign(words, 0);
  pm.undiscovered.assign(words, 0);
  pm.wrong.assign(words, 0);
  const auto hm = h.mask(n);
  const auto cm = c.mask(n);
  for (std::size_t i = 0; i < words; ++i) {
    pm.mutual[i] = hm[i] & cm[i];
    pm.undiscovered[i] = cm[i] & ~hm[i];
    pm.wrong[i] = hm[i] & ~cm[i];
  }
  return pm;
}

namespace {

std::uint32_t bitmask_of(const Conjunction& g) {
  std::uint32_t m = 0;
  for (unsigned v : g.vars) m |= std::uint32_t{1} << v;
  return m;
}

bool sat(std::uint32_t x, std::uint32_t mask) { return (x & mask) == mask; }

// Hop counts from every point to the nearest member of `in_set`;
// -1 everywhere when the set is empty.
std::vector<std::int32_t> distances_to(const std::vector<bool>& in_set,
                                       unsigned n) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::int32_t> dist(size, -1);
  std::vector<std::uint32_t> frontier;
  for (std::size_t x = 0; x < size; ++x)
    if (in_set[x]) {
      dist[x] = 0;
      frontier.push_back(static_cast<std::uint32_t>(x));
    }
  std::int32_t d = 0;
  std::vector<std::uint32_t> next;
  while (!frontier.empty()) {
    ++d;
    next.clear();
    for (std::uint32_t x : frontier)
      for (unsigned b = 0; b < n; ++b) {
        const std::uint32_t y = x ^ (std::uint32_t{1} << b);
        if (dist[y] < 0) {
          dist[y] = d;
          next.push_back(y);
        }
      }
    frontier.swap(next);
  }
  return dist;
}

std::vector<Distance> as_distances(const std::vector<std::int32_t>& dist) {
  std::vector<Distance> out(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] >= 0) out[i] = dist[i];
  return out;
}

}  // namespace

Distance brute_force_distance(AttackDefinition def, const Conjunction& h,
                              const Conjunction& c, const Instance& x) {
  const unsigned n = x.n;
  if (n > 20) throw std::domain_error("brute force limited to n <= 20");
  const std::uint32_t hm = bitmask_of(h);
  const std::uint32_t cm = bitmask_of(c);
  const std::uint32_t start =
      x.words.empty() ? 0 : static_cast<std::uint32_t>(x.words[0]);

  // Bail out when the success set is provably empty.
  switch (def) {
    case AttackDefinition::ErrorRegion:
      if (hm == cm) return std::nullopt;
      break;
    case AttackDefinition::PredictionChange:
      if (h.size() == 0) return std::nullopt;
      break;
    case AttackDefinition::CorruptedInstance:
      if (h.size() == 0 && sat(start, cm)) return std::nullopt;
      break;
  }
  const auto success = [&](std::uint32_t y) {
    switch (def) {
      case AttackDefinition::ErrorRegion:
        return sat(y, hm) != sat(y, cm);
      case AttackDefinition::PredictionChange:
        return sat(y, hm) != sat(start, hm);
      case AttackDefinition::CorruptedInstance:
        return sat(y, hm) != sat(start, cm);
    }
    return false;
  };

  if (success(start)) return 0;
  std::vector<bool> seen(std::size_t{1} << n, false);
  seen[start] = true;
  std::vector<std::uint32_t> frontier{start};
  std::vector<std::uint32_t> next;
  for (long d = 1;; ++d) {
    next.clear();
    for (std::uint32_t p : frontier)
      for (unsigned b = 0; b < n; ++b) {
        const std::uint32_t y = p ^ (std::uint32_t{1} << b);
        if (seen[y]) continue;
        if (success(y)) return d;
        seen[y] = true;
        next.push_back(y);
      }
    frontier.swap(next);
    if (frontier.empty())
      throw std::logic_error("nonempty success set never reached");
  }
}

std::vector<Distance> brute_force_all_distances(AttackDefinition def,
                                                const Conjunction& h,
                                                const Conjunction& c,
                                                unsigned n) {
  if (n > 20) throw std::domain_error("brute force limited to n <= 20");
  const std::size_t size = std::size_t{1} << n;
  const std::uint32_t hm = bitmask_of(h);
  const std::uint32_t cm = bitmask_of(c);

  if (def == AttackDefinition::ErrorRegion) {
    std::vector<bool> err(size);
    bool any = false;
    for (std::size_t x = 0; x < size; ++x) {
      err[x] = sat(static_cast<std::uint32_t>(x), hm) !=
               sat(static_cast<std::uint32_t>(x), cm);
      any = any || err[x];
    }
    if (!any) return std::vector<Distance>(size);
    return as_distances(distances_to(err, n));
  }

  // The other two definitions both want "distance to {h = b}" with the
  // polarity b chosen per start point.
  std::vector<bool> h_true(size), h_false(size);
  for (std::size_t x = 0; x < size; ++x) {
    h_true[x] = sat(static_cast<std::uint32_t>(x), hm);
    h_false[x] = !h_true[x];
  }
  const auto to_true = as_distances(distances_to(h_true, n));
  const auto to_false = as_distances(distances_to(h_false, n));

  std::vector<Distance> out(size);
  for (std::size_t x = 0; x < size; ++x) {
    const bool pick_false = def == AttackDefinition::PredictionChange
                                ? h_true[x]
                                : sat(static_cast<std::uint32_t>(x), cm);
    out[x] = pick_false ? to_false[x] : to_true[x];
  }
  return out;
}

}  // namespace hyperbound
