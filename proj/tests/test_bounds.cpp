// Error-region risk/robustness bounds: boundary sizes, budget inversion,
// and the closed-form / asymptotic companions.
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "hyperbound/ball.hpp"
#include "hyperbound/bounds.hpp"
#include "hyperbound/combinatorics.hpp"
#include "hyperbound/exact.hpp"
#include "hyperbound/learning.hpp"
#include "hyperbound/tails.hpp"

namespace hb = hyperbound;

TEST_CASE("risk_lower_bound frozen values") {
  CHECK(hb::risk_lower_bound(4, hb::Rational(5, 16), 0) == hb::Rational(5, 16));
  CHECK(hb::risk_lower_bound(4, hb::Rational(5, 16), 1) ==
        hb::Rational(11, 16));
  CHECK(hb::risk_lower_bound(4, hb::Rational(5, 16), 2) ==
        hb::Rational(15, 16));
  CHECK(hb::risk_lower_bound(4, hb::Rational(5, 16), 3) == 1);
  CHECK(hb::risk_lower_bound(100, hb::Rational(1, 2), 0) == hb::Rational(1, 2));
}

TEST_CASE("risk_lower_bound equals mu at r=0, is nondecreasing, caps at 1") {
  const unsigned long n = 30;
  const hb::Rational mus[] = {hb::Rational(1, 100), hb::Rational(1, 7),
                              hb::Rational(1, 2), hb::Rational(999, 1000)};
  for (const hb::Rational& mu : mus) {
    CHECK(hb::risk_lower_bound(n, mu, 0) == mu);
    const hb::BallIndex idx = hb::bsize_inv(n, mu);
    hb::Rational prev = 0;
    for (long r = 0; r <= static_cast<long>(n) + 2; ++r) {
      const hb::Rational v = hb::risk_lower_bound(n, mu, r);
      CHECK(v >= prev);
      CHECK(v <= 1);
      prev = v;
    }
    // Saturation exactly at the documented cap r = n - k + 1.
    const long cap = static_cast<long>(n) - idx.k + 1;
    CHECK(hb::risk_lower_bound(n, mu, cap) == 1);
    if (cap >= 1) CHECK(hb::risk_lower_bound(n, mu, cap - 1) < 1);
  }
}

TEST_CASE("min_budget frozen values and boundary semantics") {
  CHECK(hb::min_budget(4, hb::Rational(5, 16), hb::Rational(1, 2)) == 1);
  CHECK(hb::min_budget(4, hb::Rational(5, 16), hb::Rational(5, 16)) == 0);
  CHECK(hb::min_budget(4, hb::Rational(5, 16), 1) == 3);
  CHECK(hb::min_budget(1000, hb::Rational(1, 100), hb::Rational(99, 100)) ==
        74);
  CHECK(hb::min_budget(1000, hb::Rational(1, 100), hb::Rational(1, 2)) == 37);
  CHECK(hb::min_budget(10000, hb::Rational(1, 100), hb::Rational(99, 100)) ==
        233);
  CHECK(hb::min_budget(10000, hb::Rational(1, 100), hb::Rational(1, 2)) ==
        117);
}

TEST_CASE("min_budget agrees with a direct scan of risk_lower_bound") {
  const unsigned long n = 24;
  const hb::Rational mu(3, 250);
  for (int num = 1; num <= 10; ++num) {
    const hb::Rational target =
        mu + (hb::Rational(1) - mu) * hb::make_fraction(num, 10);
    const long r = hb::min_budget(n, mu, target);
    CHECK(hb::risk_lower_bound(n, mu, r) >= target);
    if (r > 0) CHECK(hb::risk_lower_bound(n, mu, r - 1) < target);
  }
}

TEST_CASE("robustness_ub_exact frozen values and the sum identity") {
  CHECK(hb::robustness_ub_exact(3, hb::Rational(1, 2)) == hb::Rational(5, 8));
  CHECK(hb::robustness_ub_exact(10, hb::Rational(1, 2)) ==
        hb::Rational(949, 1024));
  CHECK(hb::render_decimal(hb::robustness_ub_exact(1000, hb::Rational(1, 100)),
                           9) == "37.3326155");
  CHECK(hb::render_decimal(hb::robustness_ub_exact(10000, hb::Rational(1, 100)),
                           9) == "116.981083");

  // Identity: the bound is the sum of survival masses of the growing ball.
  for (const hb::Rational& mu :
       {hb::Rational(1, 100), hb::Rational(2, 7), hb::Rational(1, 2)}) {
    const unsigned long n = 21;
    const hb::BallIndex idx = hb::bsize_inv(n, mu);
    hb::Rational sum = 0;
    for (long r = 0; r <= static_cast<long>(n) - idx.k + 1; ++r)
      sum += hb::Rational(1) - hb::risk_lower_bound(n, mu, r);
    CHECK(hb::robustness_ub_exact(n, mu) == sum);
  }
}

TEST_CASE("boundary lower bounds on exact Hamming balls") {
  // For vol = Ball(k*, n) the internal bound's inverse lands exactly at
  // (k*+1, 0), so the certified internal boundary is layer k* itself and
  // the external one is layer k*+1.
  const unsigned long n = 12;
  for (long kstar = 0; kstar < static_cast<long>(n); ++kstar) {
    const hb::Rational vol =
        hb::binomial_tail(hb::TailKind::BallMass, n, kstar);
    CHECK(hb::internal_boundary_lb_exact(n, vol) ==
          hb::Rational(hb::binomial(n, kstar)));
    CHECK(hb::internal_boundary_lb(n, vol) == hb::binomial(n, kstar));
    CHECK(hb::external_boundary_lb(n, vol) ==
          hb::Rational(hb::binomial(n, kstar + 1)));
  }
}

TEST_CASE("boundary lower bounds interpolate between layers") {
  const unsigned long n = 10;
  // Halfway into layer 3: vol = Ball(2) + binom(10,3)/2 / 2^10.
  const hb::Rational vol = hb::binomial_tail(hb::TailKind::BallMass, 10, 2) +
                           hb::make_fraction(hb::binomial(10, 3), 2048);
  const hb::Rational internal = hb::internal_boundary_lb_exact(n, vol);
  const hb::Rational expect_internal =
      hb::Rational(hb::binomial(10, 2)) +
      hb::Rational(1, 2) *
          hb::Rational(hb::binomial(10, 3) - hb::binomial(10, 2));
  CHECK(internal == expect_internal);
  CHECK(hb::internal_boundary_lb(n, vol) == hb::floor_to_int(expect_internal));
  const hb::Rational expect_external =
      hb::Rational(hb::binomial(10, 3)) +
      hb::Rational(1, 2) *
          hb::Rational(hb::binomial(10, 4) - hb::binomial(10, 3));
  CHECK(hb::external_boundary_lb(n, vol) == expect_external);
}

TEST_CASE("closed-form and asymptotic bounds match their formulas") {
  CHECK(hb::budget_closed_form(10000, hb::Rational(1, 100),
                               hb::Rational(99, 100)) ==
        doctest::Approx(303.4854258770293).epsilon(1e-12));
  CHECK(hb::budget_closed_form(10000, hb::Rational(1, 100),
                               hb::Rational(1, 2)) ==
        doctest::Approx(151.74271293851464).epsilon(1e-12));
  CHECK(hb::robustness_ub_closed(10000, hb::Rational(1, 100)) ==
        doctest::Approx(152.4498197197012).epsilon(1e-12));
  CHECK(hb::budget_asymptotic(hb::Rational(1, 100), hb::Rational(99, 100)) ==
        doctest::Approx(2.3263478740408408).epsilon(1e-9));
  CHECK(hb::budget_asymptotic(hb::Rational(1, 100), hb::Rational(1, 2)) ==
        doctest::Approx(1.1631739370204204).epsilon(1e-9));
  CHECK(hb::robustness_ub_asymptotic(hb::Rational(1, 100)) ==
        doctest::Approx(1.1694405077069978).epsilon(1e-9));
}

TEST_CASE("asymptotic robustness coefficient is positive for small mu") {
  for (int num = 1; num < 50; num += 4) {
    CHECK(hb::robustness_ub_asymptotic(hb::make_fraction(num, 100)) > 0.0);
  }
}

TEST_CASE("exact budget never exceeds the rounded-up closed form") {
  for (unsigned long n : {100ul, 1000ul, 10000ul}) {
    const hb::Rational mus[] = {hb::Rational(1, 128), hb::Rational(1, 32),
                                hb::Rational(1, 4), hb::Rational(1, 2)};
    const hb::Rational targets[] = {hb::Rational(1, 2), hb::Rational(3, 4),
                                    hb::Rational(99, 100)};
    for (const hb::Rational& mu : mus) {
      for (const hb::Rational& target : targets) {
        const long exact = hb::min_budget(n, mu, target);
        const double closed = hb::budget_closed_form(n, mu, target);
        CHECK(exact <=
              static_cast<long>(std::ceil(closed)));
      }
    }
  }
}

TEST_CASE("table rows carry the frozen reference values") {
  const auto reports = hb::table1_generate({1000, 10000});
  REQUIRE(reports.size() == 2);

  const hb::BoundReport& r1000 = reports[0];
  CHECK(r1000.n == 1000);
  CHECK(r1000.mu == hb::Rational(1, 100));
  CHECK(r1000.ball.k == 463);
  CHECK(hb::render_decimal(r1000.ball.lambda, 6) == "0.716035");
  REQUIRE(r1000.entries.size() == 9);
  CHECK(r1000.entries[0].quantity == "budget_to_0.99");
  CHECK(r1000.entries[0].kind == hb::BoundKind::Exact);
  CHECK(r1000.entries[0].exact == 74);
  CHECK(r1000.entries[1].kind == hb::BoundKind::ClosedFormAllN);
  CHECK(r1000.entries[1].real ==
        doctest::Approx(95.97051824376162).epsilon(1e-12));
  CHECK(r1000.entries[2].kind == hb::BoundKind::Asymptotic);
  CHECK(r1000.entries[2].real ==
        doctest::Approx(2.3263478740408408).epsilon(1e-9));
  CHECK(r1000.entries[3].quantity == "budget_to_0.50");
  CHECK(r1000.entries[3].exact == 37);
  CHECK(r1000.entries[6].quantity == "robustness");
  CHECK(hb::render_decimal(r1000.entries[6].exact, 9) == "37.3326155");

  const hb::BoundReport& r10000 = reports[1];
  CHECK(r10000.ball.k == 4884);
  CHECK(hb::render_decimal(r10000.ball.lambda, 6) == "0.183371");
  CHECK(r10000.entries[0].exact == 233);
  CHECK(r10000.entries[3].exact == 117);
  CHECK(hb::render_decimal(r10000.entries[6].exact, 9) == "116.981083");
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(hb::risk_lower_bound(10, hb::Rational(0), 1),
                  std::domain_error);
  CHECK_THROWS_AS(hb::risk_lower_bound(10, hb::Rational(1), 1),
                  std::domain_error);
  CHECK_THROWS_AS(hb::risk_lower_bound(10, hb::Rational(1, 2), -1),
                  std::domain_error);
  CHECK_THROWS_AS(hb::min_budget(10, hb::Rational(1, 2), hb::Rational(1, 4)),
                  std::domain_error);
  CHECK_THROWS_AS(hb::budget_closed_form(10, hb::Rational(3, 4),
                                         hb::Rational(99, 100)),
                  std::domain_error);
  CHECK_THROWS_AS(hb::budget_closed_form(10, hb::Rational(1, 4),
                                         hb::Rational(1, 4)),
                  std::domain_error);
  CHECK_THROWS_AS(hb::robustness_ub_closed(10, hb::Rational(3, 4)),
                  std::domain_error);
  CHECK_THROWS_AS(hb::internal_boundary_lb(10, hb::Rational(0)),
                  std::domain_error);
  CHECK_THROWS_AS(hb::table1_generate({99}), std::domain_error);
}

TEST_CASE("hypercube neighborhood growth of a ball matches the risk bound") {
  // Pure graph brute force: grow a radius-t Hamming ball one neighborhood
  // step at a time and compare every intermediate volume with the bound,
  // which is tight on balls.  Steps past the cap must pin the volume at 1.
  for (unsigned n = 1; n <= 12; ++n) {
    const std::size_t points = std::size_t{1} << n;
    for (unsigned t = 0; t < n; ++t) {
      std::vector<char> region(points, 0);
      std::size_t members = 0;
      for (std::size_t x = 0; x < points; ++x) {
        if (std::popcount(x) <= static_cast<int>(t)) {
          region[x] = 1;
          ++members;
        }
      }
      const hb::Rational vol =
          hb::make_fraction(static_cast<long>(members), static_cast<long>(points));
      for (long r = 0; r <= static_cast<long>(n - t) + 2; ++r) {
        const hb::Rational grown =
            hb::make_fraction(static_cast<long>(members), static_cast<long>(points));
        CHECK(grown == hb::risk_lower_bound(n, vol, r));
        std::vector<char> next = region;
        for (std::size_t x = 0; x < points; ++x) {
          if (!region[x]) continue;
          for (unsigned bit = 0; bit < n; ++bit) next[x ^ (std::size_t{1} << bit)] = 1;
        }
        region.swap(next);
        members = 0;
        for (std::size_t x = 0; x < points; ++x) members += region[x] != 0;
      }
    }
  }
}

TEST_CASE("per-point ball distances match the risk bound up to n = 16") {
  // The distance from x to the radius-t ball around the origin is the
  // weight overshoot max(0, |x| - t) -- verified graph-theoretically by the
  // neighborhood-growth case above -- so expansion volumes reduce to a
  // weight histogram, which scales the exhaustive check to n = 16.
  for (unsigned n = 13; n <= 16; ++n) {
    const std::size_t points = std::size_t{1} << n;
    std::vector<long> layer(n + 1, 0);
    for (std::size_t x = 0; x < points; ++x) ++layer[std::popcount(x)];
    std::vector<long> prefix(n + 2, 0);
    for (unsigned i = 0; i <= n; ++i) prefix[i + 1] = prefix[i] + layer[i];
    for (unsigned t = 0; t < n; ++t) {
      const hb::Rational vol =
          hb::make_fraction(prefix[t + 1], static_cast<long>(points));
      for (long r = 0; r <= static_cast<long>(n - t) + 2; ++r) {
        const unsigned reach = std::min<unsigned>(t + static_cast<unsigned>(r), n);
        const hb::Rational grown =
            hb::make_fraction(prefix[reach + 1], static_cast<long>(points));
        CHECK(grown == hb::risk_lower_bound(n, vol, r));
      }
    }
  }
}

TEST_CASE("the risk bound preserves the fractional layer across budgets") {
  // A volume that completes lambda of layer k expands to one that completes
  // the same lambda of layer k+r, until the cap takes over.
  const hb::Rational lambdas[] = {hb::make_fraction(1, 3),
                                  hb::make_fraction(7, 16),
                                  hb::make_fraction(2, 3)};
  for (unsigned long n = 1; n <= 16; ++n) {
    for (long k = 0; k <= static_cast<long>(n); ++k) {
      for (const hb::Rational& lambda : lambdas) {
        const hb::Rational vol = hb::bsize(n, k, lambda);
        if (!(vol > 0 && vol < 1)) continue;
        for (long r = 0; r <= static_cast<long>(n) - k + 2; ++r) {
          CHECK(hb::risk_lower_bound(n, vol, r) == hb::bsize(n, k + r, lambda));
        }
      }
    }
  }
}

namespace {

// Internal (members with an outside neighbor) and external (outsiders with
// a member neighbor) vertex boundary counts of a subset given by flags.
std::pair<long, long> boundary_counts(unsigned n, const std::vector<char>& in) {
  const std::size_t points = std::size_t{1} << n;
  long internal = 0;
  long external = 0;
  for (std::size_t x = 0; x < points; ++x) {
    bool crosses = false;
    for (unsigned bit = 0; bit < n && !crosses; ++bit) {
      crosses = in[x ^ (std::size_t{1} << bit)] != in[x];
    }
    if (!crosses) continue;
    if (in[x]) {
      ++internal;
    } else {
      ++external;
    }
  }
  return {internal, external};
}

}  // namespace

TEST_CASE("boundary bounds hold for every subset of cubes up to n = 4") {
  for (unsigned n = 1; n <= 4; ++n) {
    const unsigned points = 1u << n;
    // The bounds depend only on the volume, so precompute them per count.
    std::vector<hb::Rational> internal_lb(points);
    std::vector<hb::Rational> external_lb(points);
    for (unsigned members = 1; members < points; ++members) {
      const hb::Rational vol = hb::make_fraction(members, points);
      internal_lb[members] = hb::internal_boundary_lb_exact(n, vol);
      external_lb[members] = hb::external_boundary_lb(n, vol);
    }
    long checked = 0;
    long violations = 0;
    const std::uint64_t subsets = std::uint64_t{1} << points;
    std::vector<char> in(points);
    for (std::uint64_t subset = 1; subset + 1 < subsets; ++subset) {
      unsigned members = 0;
      for (unsigned x = 0; x < points; ++x) {
        in[x] = (subset >> x) & 1u;
        members += in[x];
      }
      const auto [internal, external] = boundary_counts(n, in);
      if (hb::Rational(internal) < internal_lb[members]) ++violations;
      if (hb::Rational(external) < external_lb[members]) ++violations;
      ++checked;
    }
    CHECK(violations == 0);
    CHECK(checked == static_cast<long>(subsets - 2));
  }
}

TEST_CASE("boundary bounds hold for random regions up to n = 12") {
  hb::Prng prng(20260815);
  for (unsigned n : {6u, 9u, 12u}) {
    const std::size_t points = std::size_t{1} << n;
    for (int trial = 0; trial < 12; ++trial) {
      const double density = 0.05 + 0.9 * prng.next_unit();
      std::vector<char> in(points, 0);
      std::size_t members = 0;
      for (std::size_t x = 0; x < points; ++x) {
        in[x] = prng.next_unit() < density;
        members += in[x];
      }
      if (members == 0 || members == points) continue;
      const auto [internal, external] = boundary_counts(n, in);
      const hb::Rational vol =
          hb::make_fraction(static_cast<long>(members), static_cast<long>(points));
      CHECK(hb::Rational(internal) >= hb::internal_boundary_lb_exact(n, vol));
      CHECK(hb::Rational(external) >= hb::external_boundary_lb(n, vol));
      CHECK(hb::internal_boundary_lb(n, vol) <= internal);
    }
  }
}
