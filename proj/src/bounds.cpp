#include "hyperbound/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "hyperbound/combinatorics.hpp"
#include "hyperbound/normal.hpp"

namespace hyperbound {

namespace {

void check_vol(const char* who, const Rational& vol) {
  if (sgn(vol) <= 0 || cmp(vol, 1) >= 0)
    throw std::domain_error(std::string(who) + ": volume must lie in (0, 1)");
}

}  // namespace

Rational internal_boundary_lb_exact(unsigned long n, const Rational& vol) {
  check_vol("internal_boundary_lb", vol);
  BallIndex b = bsize_inv(n, vol);
  Rational lo(binomial(n, b.k - 1)), hi(binomial(n, b.k));
  return lo + b.lambda * (hi - lo);
}

mpz_class internal_boundary_lb(unsigned long n, const Rational& vol) {
  return floor_to_int(internal_boundary_lb_exact(n, vol));
}

Rational external_boundary_lb(unsigned long n, const Rational& vol) {
  check_vol("external_boundary_lb", vol);
  BallIndex b = bsize_inv(n, vol);
  Rational lo(binomial(n, b.k)), hi(binomial(n, b.k + 1));
  return lo + b.lambda * (hi - lo);
}

Rational risk_lower_bound(unsigned long n, const Rational& mu, long r) {
  check_vol("risk_lower_bound", mu);
  if (r < 0) throw std::domain_error("risk_lower_bound: r must be >= 0");
  BallIndex b = bsize_inv(n, mu);
  return bsize(n, b.k + r, b.lambda);  // bsize caps at 1 past k = n
}

long min_budget(unsigned long n, const Rational& mu, const Rational& target) {
  check_vol("min_budget", mu);
  if (cmp(mu, target) > 0 || cmp(target, 1) > 0)
    throw std::domain_error("min_budget: need mu <= target <= 1");
  BallIndex b = bsize_inv(n, mu);

  // bsize(n, K, lambda) >= target, compared exactly over the common
  // denominator t_den * l_den * 2^n:
  //   t_den * (prefix(K) * l_den + l_num * binom(n,K)) >= t_num * l_den * 2^n
  const mpz_class t_num = target.get_num(), t_den = target.get_den();
  const mpz_class l_num = b.lambda.get_num(), l_den = b.lambda.get_den();
  const mpz_class rhs = t_num * l_den * pow2(n);

  BinomialScan scan(n);
  while (scan.index() < static_cast<unsigned long>(b.k)) scan.step();
  for (unsigned long K = static_cast<unsigned long>(b.k);; ++K) {
    if (t_den * (scan.prefix() * l_den + l_num * scan.current()) >= rhs)
      return static_cast<long>(K) - b.k;
    if (K == n) break;
    scan.step();
  }
  // Nothing below the cap reached the target; the capped value 1 does.
  return static_cast<long>(n) - b.k + 1;
}

Rational robustness_ub_exact(unsigned long n, const Rational& mu) {
  check_vol("robustness_ub_exact", mu);
  BallIndex b = bsize_inv(n, mu);
  const mpz_class l_num = b.lambda.get_num(), l_den = b.lambda.get_den();
  const mpz_class full = pow2(n);

  // sum_{K=k}^{n} (1 - bsize(n,K,lambda)); the final r = n-k+1 term is 0 by
  // the cap.  Each addend over the common denominator l_den * 2^n is
  // l_den*(2^n - prefix(K)) - l_num*binom(n,K).
  mpz_class total = 0;
  BinomialScan scan(n);
  while (scan.index() < static_cast<unsigned long>(b.k)) scan.step();
  for (unsigned long K = static_cast<unsigned long>(b.k);; ++K) {
    total += l_den * (full - scan.prefix()) - l_num * scan.current();
    if (K == n) break;
    scan.step();
  }
  return make_fraction(total, l_den * full);
}

double budget_closed_form(unsigned long n, const Rational& mu,
                          const Rational& mu_prime) {
  if (sgn(mu) <= 0 || cmp(mu, Rational(1, 2)) > 0)
    throw std::domain_error("budget_closed_form: need 0 < mu <= 1/2");
  if (cmp(mu_prime, Rational(1, 2)) < 0 || cmp(mu_prime, 1) > 0)
    throw std::domain_error("budget_closed_form: need 1/2 <= mu_prime <= 1");
  const double nd = static_cast<double>(n);
  const double first = std::sqrt(-nd * ln_rational(mu) / 2.0);
  if (cmp(mu_prime, Rational(1, 2)) == 0) return first;  // half target: r'
  Rational rest = Rational(1) - mu_prime;
  if (sgn(rest) == 0) return INFINITY;
  return first + std::sqrt(-nd * ln_rational(rest) / 2.0);
}

double budget_asymptotic(const Rational& mu, const Rational& mu_prime) {
  if (cmp(mu, mu_prime) > 0)
    throw std::domain_error("budget_asymptotic: need mu <= mu_prime");
  const double lo = normal_quantile(mpq_get_d(mu.get_mpq_t()));
  const double hi = normal_quantile(mpq_get_d(mu_prime.get_mpq_t()));
  return (hi - lo) / 2.0;
}

double robustness_ub_closed(unsigned long n, const Rational& mu) {
  if (sgn(mu) <= 0 || cmp(mu, Rational(1, 2)) > 0)
    throw std::domain_error("robustness_ub_closed: need 0 < mu <= 1/2");
  const double nd = static_cast<double>(n);
  const double mud = mpq_get_d(mu.get_mpq_t());
  return std::sqrt(-nd * ln_rational(mu) / 2.0) + mud * std::sqrt(nd / 2.0);
}

double robustness_ub_asymptotic(const Rational& mu) {
  if (sgn(mu) <= 0 || cmp(mu, Rational(1, 2)) > 0)
    throw std::domain_error("robustness_ub_asymptotic: need 0 < mu <= 1/2");
  const double mud = mpq_get_d(mu.get_mpq_t());
  // Phi^{-1}(1-mu) = -Phi^{-1}(mu); the negated form stays accurate for
  // mu too small for 1-mu to be distinguishable from 1 in double.
  return -normal_quantile(mud) / 2.0 + mud * std::sqrt(M_PI / 8.0);
}

std::vector<BoundReport> table1_generate(const std::vector<unsigned long>& n_list) {
  const Rational mu(1, 100);
  const Rational to99(99, 100), to50(1, 2);
  std::vector<BoundReport> out;
  out.reserve(n_list.size());
  for (unsigned long n : n_list) {
    if (n < 100) throw std::domain_error("table1_generate: each n must be >= 100");
    BoundReport rep;
    rep.n = n;
    rep.mu = mu;
    rep.ball = bsize_inv(n, mu);
    rep.entries = {
        {"budget_to_0.99", BoundKind::Exact, Rational(min_budget(n, mu, to99)), 0.0},
        {"budget_to_0.99", BoundKind::ClosedFormAllN, 0, budget_closed_form(n, mu, to99)},
        {"budget_to_0.99", BoundKind::Asymptotic, 0, budget_asymptotic(mu, to99)},
        {"budget_to_0.50", BoundKind::Exact, Rational(min_budget(n, mu, to50)), 0.0},
        {"budget_to_0.50", BoundKind::ClosedFormAllN, 0, budget_closed_form(n, mu, to50)},
        {"budget_to_0.50", BoundKind::Asymptotic, 0, budget_asymptotic(mu, to50)},
        {"robustness", BoundKind::Exact, robustness_ub_exact(n, mu), 0.0},
        {"robustness", BoundKind::ClosedFormAllN, 0, robustness_ub_closed(n, mu)},
        {"robustness", BoundKind::Asymptotic, 0, robustness_ub_asymptotic(mu)},
    };
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace hyperbound
