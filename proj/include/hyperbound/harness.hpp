// Monte Carlo estimation of adversarial risk/robustness of learned
// hypotheses, and the seeded experiment driver that sweeps target sizes,
// trains a learner per run, and writes per-run records as CSV.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hyperbound/conjunction.hpp"
#include "hyperbound/learning.hpp"

namespace hyperbound {

enum class Algorithm { FindS, Swapping };

struct ExperimentConfig {
  unsigned n = 100;
  Rational epsilon = Rational(1, 100);
  Rational delta = Rational(1, 20);
  Algorithm algorithm = Algorithm::FindS;
  std::vector<long> target_sizes;
  long runs = 50;
  long eval_samples = 2000;
  std::uint64_t seed = 0;
  std::vector<AttackDefinition> definitions = {
      AttackDefinition::ErrorRegion, AttackDefinition::PredictionChange,
      AttackDefinition::CorruptedInstance};
  long generations = 0;  // 0: use the 2*n*q default at run time
};

// Parse the flat key=value config grammar:
//   - one `key = value` per line; blank lines skipped; `#` starts a comment;
//   - keys: n, epsilon, delta, algorithm (finds|swapping), target_sizes
//     (comma list of sizes and a-b ranges), runs, eval_samples, seed,
//     definitions (comma list of er|pc|ci, or all), generations;
//   - unknown or repeated keys are errors.
// Every error message carries "<path>:<line>: " context.
ExperimentConfig load_config(const std::string& path);

// Throws std::invalid_argument on out-of-range fields (runs/eval_samples
// < 1, sizes outside [1, n], duplicate sizes, epsilon/delta outside (0,1),
// empty definitions).
void validate_config(const ExperimentConfig& config);

// generations when positive, else the default 2 * n * q(epsilon).
long effective_generations(const ExperimentConfig& config);

struct Estimate {
  bool infinite = false;
  double mean = 0;
  double stderr_ = 0;  // sample stddev / sqrt(N); 0 when N = 1 or infinite
};

// Mean exact perturbation distance over a drawn sample, each instance
// resolved through its case profile in O(n).  Infinite when no adversarial
// point exists for some sampled instance: always for error-region attacks
// on h = c, and only there for nonempty hypotheses.  (The empty hypothesis
// the local search starts from never changes its prediction, so prediction
// change is infinite for it, and corrupted-instance attacks on it are
// infinite as soon as a positively-labeled instance is drawn.)
Estimate estimate_robustness_on(const std::vector<Instance>& sample,
                                const Conjunction& h, const Conjunction& c,
                                AttackDefinition def);

// Drawing wrapper around estimate_robustness_on; samples >= 1.
Estimate estimate_robustness(const Conjunction& h, const Conjunction& c,
                             AttackDefinition def, long samples, unsigned n,
                             Prng& prng);

// Fraction of sampled instances whose exact distance is <= r (never
// infinite: unreachable instances simply do not count as successes).
Estimate estimate_risk_on(const std::vector<Instance>& sample,
                          const Conjunction& h, const Conjunction& c,
                          AttackDefinition def, long r);

Estimate estimate_risk(const Conjunction& h, const Conjunction& c,
                       AttackDefinition def, long r, long samples, unsigned n,
                       Prng& prng);

struct DefinitionEstimate {
  AttackDefinition def = AttackDefinition::ErrorRegion;
  Estimate estimate;
};

struct RunRecord {
  long target_size = 0;
  long run_index = 0;
  long hypothesis_size = 0;
  long m = 0, u = 0, w = 0;  // hypothesis/target overlap counts
  std::vector<DefinitionEstimate> estimates;  // config definition order
};

struct DefinitionAggregate {
  AttackDefinition def = AttackDefinition::ErrorRegion;
  long finite_runs = 0;
  long infinite_runs = 0;
  double finite_mean = 0;  // mean of per-run means over the finite runs
};

struct SizeAggregate {
  long target_size = 0;
  double mean_hypothesis_size = 0;
  std::vector<DefinitionAggregate> by_definition;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> records;       // sorted by (target_size, run_index)
  std::vector<SizeAggregate> aggregates;
};

// Worker cap: HYPERBOUND_THREADS when set (positive integer), else the
// hardware concurrency (at least 1).
long max_threads();

// One experiment: for every (target_size, run_index), an independent
// generator Prng::substream(seed, target_size, run_index) drives, in
// order, the target draw (uniform size-|c| conjunction via partial
// Fisher-Yates), training, and one shared evaluation sample reused by
// every attack definition.  Runs execute concurrently but each record is
// a pure function of (config, seed), so thread count and scheduling
// cannot change the result.  `progress` (optional) is invoked after each
// completed run with (done, total).
ExperimentResult run_experiment(
    const ExperimentConfig& config,
    const std::function<void(long, long)>& progress = {});

// CSV with mandatory header
//   algorithm,definition,n,target_size,run_index,hypothesis_size,m,u,w,
//   mean_distance,infinite,stderr,seed
// one row per (record, definition); UTF-8, '\n' endings; mean_distance and
// stderr printed as %.6f, with an empty mean and stderr 0.000000 on
// infinite rows (the `infinite` column is 0/1).  I/O failures throw with
// the path in the message.
void write_csv(const ExperimentResult& result, const std::string& path);

// Lowercase CSV tokens: finds/swapping, er/pc/ci.
std::string algorithm_token(Algorithm algorithm);
std::string definition_token(AttackDefinition def);

}  // namespace hyperbound
