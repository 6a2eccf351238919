// hyperbound CLI: exact tail quantities, hypercube risk/robustness bounds,
// conjunction attack analysis, the seeded experiment driver, and the binary
// entropy solver.  All numeric output is rendered from exact values at the
// configured precision.
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hyperbound/bounds.hpp"
#include "hyperbound/conjunction.hpp"
#include "hyperbound/entropy.hpp"
#include "hyperbound/harness.hpp"
#include "hyperbound/tails.hpp"

namespace hb = hyperbound;

namespace {

int g_precision = 6;

std::string real_str(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", g_precision, value);
  return buffer;
}

std::string rational_str(const hb::Rational& value) {
  return hb::render_decimal(value, g_precision);
}

int usage_error(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  return 2;
}

struct TailArgs {
  std::string kind;
  unsigned long n = 0;
  long t = 0;
  bool t_set = false;
  std::string gamma;
  bool approx = false;
};

int run_tail(const TailArgs& args) {
  hb::TailKind kind;
  if (args.kind == "C")
    kind = hb::TailKind::UpperTail_C;
  else if (args.kind == "D")
    kind = hb::TailKind::SymmetricComplement_D;
  else if (args.kind == "Ball")
    kind = hb::TailKind::BallMass;
  else
    kind = hb::TailKind::ExcessExpectation_rho;

  if (!args.gamma.empty()) {
    if (args.kind != "C" && args.kind != "D")
      return usage_error("--solve supports only the monotone kinds C and D");
    const hb::ThresholdCrossing crossing =
        hb::threshold_crossing(kind, args.n, hb::parse_rational(args.gamma));
    std::printf("t %ld\n", crossing.t);
    std::printf("value_at_t %s\n", rational_str(crossing.value_at_t).c_str());
    std::printf("value_at_t_plus_1 %s\n",
                rational_str(crossing.value_at_t_plus_1).c_str());
    return 0;
  }
  if (args.approx) {
    std::printf("%s\n",
                real_str(hb::binomial_tail_approx(kind, args.n, args.t)).c_str());
    return 0;
  }
  std::printf("%s\n", rational_str(hb::binomial_tail(kind, args.n, args.t)).c_str());
  return 0;
}

std::vector<unsigned long> parse_n_list(const std::string& text) {
  std::vector<unsigned long> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string part =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (part.empty()) throw std::invalid_argument("empty entry in n list");
    std::size_t used = 0;
    out.push_back(std::stoul(part, &used));
    if (used != part.size())
      throw std::invalid_argument("bad n value '" + part + "'");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int run_bounds_table(const std::string& n_list, const std::string& mu_text) {
  if (hb::parse_rational(mu_text) != hb::Rational(1, 100))
    return usage_error("the bound table is defined for --mu 0.01");
  const auto reports = hb::table1_generate(parse_n_list(n_list));
  for (const hb::BoundReport& report : reports) {
    std::printf("n %lu  mu %s  k %ld  lambda %s\n", report.n,
                rational_str(report.mu).c_str(), report.ball.k,
                rational_str(report.ball.lambda).c_str());
    std::printf("%-16s %-14s %-14s %s\n", "quantity", "exact",
                "closed_form", "asymptotic");
    for (std::size_t row = 0; row < report.entries.size(); row += 3) {
      const hb::BoundEntry& exact = report.entries[row];
      const hb::BoundEntry& closed = report.entries[row + 1];
      const hb::BoundEntry& limit = report.entries[row + 2];
      std::printf("%-16s %-14s %-14s %s\n", exact.quantity.c_str(),
                  rational_str(exact.exact).c_str(),
                  real_str(closed.real).c_str(), real_str(limit.real).c_str());
    }
  }
  return 0;
}

struct ConjunctionArgs {
  long m = 0, u = 0, w = 0, n = -1, r = 0;
  std::string def = "all";
};

void print_er_line(const hb::ConjunctionStructure& s, long r) {
  const hb::Rational risk =
      hb::risk_exact(hb::AttackDefinition::ErrorRegion, s, r);
  if (s.same()) {
    std::printf("er: risk %s  robustness inf\n", rational_str(risk).c_str());
    return;
  }
  const auto robustness =
      hb::robustness_exact(hb::AttackDefinition::ErrorRegion, s);
  const hb::RobustnessBounds bounds = hb::er_robustness_theorem_bounds(s);
  std::printf("er: risk %s  theorem_lb %s  robustness %s  theorem_bounds (%s, %s)\n",
              rational_str(risk).c_str(),
              rational_str(hb::er_risk_theorem_lb(s, r)).c_str(),
              rational_str(*robustness).c_str(),
              rational_str(bounds.lower).c_str(),
              rational_str(bounds.upper).c_str());
}

void print_pc_line(const hb::ConjunctionStructure& s, long r) {
  const auto robustness =
      hb::robustness_exact(hb::AttackDefinition::PredictionChange, s);
  std::printf("pc: risk %s  robustness %s\n",
              rational_str(hb::risk_exact(hb::AttackDefinition::PredictionChange,
                                          s, r))
                  .c_str(),
              rational_str(*robustness).c_str());
}

void print_ci_line(const hb::ConjunctionStructure& s, long r) {
  const auto robustness =
      hb::robustness_exact(hb::AttackDefinition::CorruptedInstance, s);
  const auto bounds = hb::ci_robustness_bounds(s);
  std::printf("ci: risk %s  robustness %s  theorem_bounds (%s, %s)\n",
              rational_str(hb::risk_exact(hb::AttackDefinition::CorruptedInstance,
                                          s, r))
                  .c_str(),
              rational_str(*robustness).c_str(),
              rational_str(bounds.first).c_str(),
              rational_str(bounds.second).c_str());
}

int run_conjunction(const ConjunctionArgs& args) {
  if (args.m == 0 && args.u == 0) {
    // Empty target concept (|c| = 0). Prediction-change quantities depend
    // only on the hypothesis, so serve them from the closed forms; the
    // other definitions need a nonempty target.
    if (args.def != "pc")
      return usage_error("an empty target (m = u = 0) supports only --def pc");
    if (args.w < 1) return usage_error("hypothesis must be nonempty");
    const long n = args.n < 0 ? args.w : args.n;
    if (n < args.w)
      return usage_error("ambient dimension smaller than the variable count");
    const hb::Rational mu =
        hb::Rational(1) -
        hb::make_fraction(1, hb::pow2(static_cast<unsigned long>(args.w)));
    std::printf(
        "structure m=%ld u=%ld w=%ld n=%ld  |h|=%ld |c|=%ld  budget r=%ld\n",
        args.m, args.u, args.w, n, args.w, 0L, args.r);
    std::printf("mu %s\n", rational_str(mu).c_str());
    std::printf("pc: risk %s  robustness %s\n",
                rational_str(hb::pc_risk_formula(args.w, args.r)).c_str(),
                rational_str(hb::pc_robustness_formula(args.w)).c_str());
    return 0;
  }
  const hb::ConjunctionStructure s =
      hb::make_structure(args.m, args.u, args.w, args.n);
  std::printf("structure m=%ld u=%ld w=%ld n=%ld  |h|=%ld |c|=%ld  budget r=%ld\n",
              s.m, s.u, s.w, s.n, s.h_size(), s.c_size(), args.r);
  std::printf("mu %s\n", rational_str(hb::error_mass(s)).c_str());
  if (args.def == "er" || args.def == "all") print_er_line(s, args.r);
  if (args.def == "pc" || args.def == "all") print_pc_line(s, args.r);
  if (args.def == "ci" || args.def == "all") print_ci_line(s, args.r);
  return 0;
}

int run_experiment_cmd(const std::string& config_path,
                       const std::string& out_path,
                       const std::optional<std::uint64_t>& seed) {
  hb::ExperimentConfig config = hb::load_config(config_path);
  if (seed) config.seed = *seed;
  const auto progress = [](long done, long total) {
    std::fprintf(stderr, "\rrun %ld/%ld", done, total);
    std::fflush(stderr);
  };
  const hb::ExperimentResult result = hb::run_experiment(config, progress);
  std::fputc('\n', stderr);
  hb::write_csv(result, out_path);

  std::printf("algorithm %s  n %u  seed %llu  runs %ld  eval_samples %ld\n",
              hb::algorithm_token(config.algorithm).c_str(), config.n,
              static_cast<unsigned long long>(config.seed), config.runs,
              config.eval_samples);
  for (const hb::SizeAggregate& aggregate : result.aggregates) {
    std::printf("size %ld  mean_h %.2f", aggregate.target_size,
                aggregate.mean_hypothesis_size);
    for (const hb::DefinitionAggregate& slot : aggregate.by_definition) {
      std::printf("  %s ", hb::definition_token(slot.def).c_str());
      if (slot.finite_runs == 0)
        std::printf("inf");
      else
        std::printf("%s", real_str(slot.finite_mean).c_str());
      if (slot.infinite_runs > 0 && slot.finite_runs > 0)
        std::printf(" [%ld inf]", slot.infinite_runs);
    }
    std::printf("\n");
  }
  return 0;
}

int run_entropy(double c) {
  const double root = hb::entropy_solve(c);  // validates 0 < c <= 1
  if (c == 1.0) {
    // The bracket's upper expression degenerates at c = 1; the root is the
    // domain endpoint itself.
    std::printf("root %s\n", real_str(root).c_str());
    std::printf("interval (0.25, 0.5]\n");
    return 0;
  }
  const hb::EntropyBrackets brackets = hb::entropy_solve_brackets(c);
  if (!(brackets.lower < root && root < brackets.upper))
    throw std::logic_error("entropy root escaped its bracketing interval");
  std::printf("root %s\n", real_str(root).c_str());
  std::printf("interval (%s, %s)\n", real_str(brackets.lower).c_str(),
              real_str(brackets.upper).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact adversarial risk/robustness bounds on the Boolean hypercube"};
  app.require_subcommand(1);
  app.add_option("--precision", g_precision, "significant digits for output")
      ->check(CLI::Range(1, 50))
      ->capture_default_str();

  TailArgs tail_args;
  CLI::App* tail = app.add_subcommand(
      "tail", "binomial tail quantities C/D/Ball/rho, exact or solved");
  tail->add_option("--kind", tail_args.kind, "C, D, Ball, or rho")
      ->required()
      ->check(CLI::IsMember({"C", "D", "Ball", "rho"}));
  tail->add_option("--n", tail_args.n, "dimension")->required();
  CLI::Option* tail_t = tail->add_option("--t", tail_args.t, "threshold");
  CLI::Option* tail_solve = tail->add_option(
      "--solve", tail_args.gamma, "locate the crossing of this target value");
  tail_solve->excludes(tail_t);
  tail->add_flag("--approx", tail_args.approx,
                 "log-space floating evaluation instead of exact")
      ->needs(tail_t);

  std::string bounds_n_list, bounds_mu = "0.01", bounds_target;
  unsigned long bounds_n = 0;
  long bounds_r = 0;
  bool bounds_closed = false, bounds_limit = false;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "error-region risk/robustness bounds for arbitrary classifiers");
  bounds->require_subcommand(1);
  CLI::App* bounds_table =
      bounds->add_subcommand("table", "budget and robustness reference table");
  bounds_table->add_option("--n", bounds_n_list, "comma-separated dimensions")
      ->required();
  bounds_table->add_option("--mu", bounds_mu, "error mass (0.01)")
      ->capture_default_str();
  CLI::App* bounds_risk =
      bounds->add_subcommand("risk", "risk lower bound at a budget");
  bounds_risk->add_option("--n", bounds_n, "dimension")->required();
  bounds_risk->add_option("--mu", bounds_mu, "error mass")->required();
  bounds_risk->add_option("--r", bounds_r, "budget")->required();
  CLI::App* bounds_budget = bounds->add_subcommand(
      "budget", "smallest budget pushing the risk bound to a target");
  bounds_budget->add_option("--n", bounds_n, "dimension")->required();
  bounds_budget->add_option("--mu", bounds_mu, "error mass")->required();
  bounds_budget->add_option("--target", bounds_target, "risk target")
      ->required();
  CLI::App* bounds_rob =
      bounds->add_subcommand("robustness", "robustness upper bound");
  bounds_rob->add_option("--n", bounds_n, "dimension")->required();
  bounds_rob->add_option("--mu", bounds_mu, "error mass")->required();
  CLI::Option* rob_closed = bounds_rob->add_flag(
      "--closed", bounds_closed, "closed-form bound instead of exact");
  bounds_rob
      ->add_flag("--limit", bounds_limit,
                 "n->infinity coefficient of sqrt(n) instead of exact")
      ->excludes(rob_closed);

  ConjunctionArgs conj_args;
  CLI::App* conj = app.add_subcommand(
      "conjunction", "exact attack analysis of a hypothesis/target pair");
  conj->add_option("--m", conj_args.m, "mutual variables")->required();
  conj->add_option("--u", conj_args.u, "undiscovered variables")->required();
  conj->add_option("--w", conj_args.w, "wrong variables")->required();
  conj->add_option("--n", conj_args.n, "dimension (default m+u+w)");
  conj->add_option("--def", conj_args.def, "er, pc, ci, or all")
      ->check(CLI::IsMember({"er", "pc", "ci", "all"}))
      ->capture_default_str();
  conj->add_option("--r", conj_args.r, "risk budget")->capture_default_str();

  std::string exp_config, exp_out;
  std::uint64_t exp_seed = 0;
  CLI::App* experiment = app.add_subcommand(
      "experiment", "train/evaluate sweep from a config file, CSV output");
  experiment->add_option("--config", exp_config, "key=value config file")
      ->required();
  experiment->add_option("--out", exp_out, "CSV output path")->required();
  CLI::Option* seed_opt =
      experiment->add_option("--seed", exp_seed, "override the config seed");

  double entropy_c = 0;
  CLI::App* entropy = app.add_subcommand(
      "entropy", "solve H(p) = c on (0, 1/2] with its bracketing interval");
  entropy->add_option("--solve", entropy_c, "entropy value c")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (tail->parsed()) {
      tail_args.t_set = tail_t->count() > 0;
      if (!tail_args.t_set && tail_solve->count() == 0)
        return usage_error("tail needs exactly one of --t or --solve");
      return run_tail(tail_args);
    }
    if (bounds->parsed()) {
      const hb::Rational mu = hb::parse_rational(bounds_mu);
      if (bounds_table->parsed())
        return run_bounds_table(bounds_n_list, bounds_mu);
      if (bounds_risk->parsed()) {
        std::printf("%s\n",
                    rational_str(hb::risk_lower_bound(bounds_n, mu, bounds_r))
                        .c_str());
        return 0;
      }
      if (bounds_budget->parsed()) {
        std::printf("%ld\n", hb::min_budget(bounds_n, mu,
                                            hb::parse_rational(bounds_target)));
        return 0;
      }
      if (bounds_closed)
        std::printf("%s\n", real_str(hb::robustness_ub_closed(bounds_n, mu)).c_str());
      else if (bounds_limit)
        std::printf("%s\n", real_str(hb::robustness_ub_asymptotic(mu)).c_str());
      else
        std::printf("%s\n",
                    rational_str(hb::robustness_ub_exact(bounds_n, mu)).c_str());
      return 0;
    }
    if (conj->parsed()) return run_conjunction(conj_args);
    if (experiment->parsed()) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count() > 0) seed = exp_seed;
      return run_experiment_cmd(exp_config, exp_out, seed);
    }
    if (entropy->parsed()) return run_entropy(entropy_c);
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  }
  return usage_error("no subcommand given");
}
