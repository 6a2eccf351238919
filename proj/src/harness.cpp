#include "hyperbound/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hyperbound {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

long parse_long(const std::string& text) {
  std::size_t used = 0;
  const long value = std::stol(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters");
  return value;
}

std::uint64_t parse_u64(const std::string& text) {
  if (text.empty() || text[0] == '-')
    throw std::invalid_argument("expected an unsigned integer");
  std::size_t used = 0;
  const std::uint64_t value = std::stoull(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters");
  return value;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  std::stringstream in(text);
  while (std::getline(in, current, ',')) parts.push_back(trim(current));
  return parts;
}

std::vector<long> parse_sizes(const std::string& text) {
  std::vector<long> sizes;
  for (const std::string& part : split_commas(text)) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      sizes.push_back(parse_long(part));
      continue;
    }
    const long lo = parse_long(trim(part.substr(0, dash)));
    const long hi = parse_long(trim(part.substr(dash + 1)));
    if (lo > hi) throw std::invalid_argument("empty range " + part);
    for (long s = lo; s <= hi; ++s) sizes.push_back(s);
  }
  return sizes;
}

std::vector<AttackDefinition> parse_definitions(const std::string& text) {
  std::vector<AttackDefinition> defs;
  for (const std::string& part : split_commas(text)) {
    if (part == "er")
      defs.push_back(AttackDefinition::ErrorRegion);
    else if (part == "pc")
      defs.push_back(AttackDefinition::PredictionChange);
    else if (part == "ci")
      defs.push_back(AttackDefinition::CorruptedInstance);
    else if (part == "all") {
      defs.push_back(AttackDefinition::ErrorRegion);
      defs.push_back(AttackDefinition::PredictionChange);
      defs.push_back(AttackDefinition::CorruptedInstance);
    } else {
      throw std::invalid_argument("unknown definition '" + part + "'");
    }
  }
  for (std::size_t i = 0; i < defs.size(); ++i)
    for (std::size_t j = i + 1; j < defs.size(); ++j)
      if (defs[i] == defs[j])
        throw std::invalid_argument("duplicate definition");
  return defs;
}

struct Accumulator {
  long count = 0;
  double sum = 0, sum_squares = 0;
  bool infinite = false;

  void add(double value) {
    ++count;
    sum += value;
    sum_squares += value * value;
  }
  Estimate finish() const {
    if (infinite) return Estimate{true, 0, 0};
    Estimate e;
    e.mean = sum / static_cast<double>(count);
    if (count > 1) {
      const double var =
          std::max(0.0, sum_squares - static_cast<double>(count) * e.mean *
                                          e.mean) /
          static_cast<double>(count - 1);
      e.stderr_ = std::sqrt(var / static_cast<double>(count));
    }
    return e;
  }
};

// Per-instance exact distance plumbing shared by both estimators.  The
// empty hypothesis (constant true) falls outside ConjunctionStructure, so
// its three cases are resolved directly from the target's value.
struct DistanceEvaluator {
  bool h_empty;
  std::vector<std::uint64_t> c_mask;
  ConjunctionStructure structure{};
  ProfileMasks masks;
  AttackDefinition def;

  DistanceEvaluator(const Conjunction& h, const Conjunction& c,
                    AttackDefinition def_, unsigned n)
      : h_empty(h.size() == 0), def(def_) {
    if (c.size() == 0) throw std::invalid_argument("target must be nonempty");
    if (h_empty) {
      c_mask = c.mask(n);
    } else {
      structure = classify(h, c, n);
      masks = profile_masks(h, c, n);
    }
  }

  Distance operator()(const Instance& x) const {
    if (!h_empty)
      return perturbation_distance(def, structure, masks.profile_of(x));
    const bool c_true = falsified_count(c_mask, x) == 0;
    switch (def) {
      case AttackDefinition::ErrorRegion:
        return c_true ? 1 : 0;  // falsify one target variable / already in
      case AttackDefinition::PredictionChange:
        return std::nullopt;  // constant hypothesis never flips
      case AttackDefinition::CorruptedInstance:
        return c_true ? Distance{} : Distance{0};
    }
    throw std::logic_error("unreachable attack definition");
  }
};

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config");
  ExperimentConfig config;
  std::set<std::string> seen;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto context = [&](const std::string& message) {
      return path + ":" + std::to_string(line_number) + ": " + message;
    };
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(context("expected key = value"));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error(context("expected key = value"));
    if (!seen.insert(key).second)
      throw std::runtime_error(context("repeated key '" + key + "'"));
    try {
      if (key == "n") {
        const long n = parse_long(value);
        if (n < 1) throw std::invalid_argument("n must be at least 1");
        config.n = static_cast<unsigned>(n);
      } else if (key == "epsilon") {
        config.epsilon = parse_rational(value);
      } else if (key == "delta") {
        config.delta = parse_rational(value);
      } else if (key == "algorithm") {
        if (value == "finds")
          config.algorithm = Algorithm::FindS;
        else if (value == "swapping")
          config.algorithm = Algorithm::Swapping;
        else
          throw std::invalid_argument("unknown algorithm '" + value + "'");
      } else if (key == "target_sizes") {
        config.target_sizes = parse_sizes(value);
      } else if (key == "runs") {
        config.runs = parse_long(value);
      } else if (key == "eval_samples") {
        config.eval_samples = parse_long(value);
      } else if (key == "seed") {
        config.seed = parse_u64(value);
      } else if (key == "definitions") {
        config.definitions = parse_definitions(value);
      } else if (key == "generations") {
        config.generations = parse_long(value);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::exception& error) {
      throw std::runtime_error(context(error.what()));
    }
  }
  try {
    validate_config(config);
  } catch (const std::exception& error) {
    throw std::runtime_error(path + ": " + error.what());
  }
  return config;
}

void validate_config(const ExperimentConfig& config) {
  if (config.n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(config.epsilon > 0 && config.epsilon < 1))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(config.delta > 0 && config.delta < 1))
    throw std::invalid_argument("delta must lie in (0, 1)");
  if (config.runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (config.eval_samples < 1)
    throw std::invalid_argument("eval_samples must be at least 1");
  if (config.generations < 0)
    throw std::invalid_argument("generations must be nonnegative");
  if (config.target_sizes.empty())
    throw std::invalid_argument("target_sizes must be nonempty");
  std::set<long> unique_sizes;
  for (long size : config.target_sizes) {
    if (size < 1 || size > static_cast<long>(config.n))
      throw std::invalid_argument("target size " + std::to_string(size) +
                                  " outside [1, n]");
    if (!unique_sizes.insert(size).second)
      throw std::invalid_argument("duplicate target size " +
                                  std::to_string(size));
  }
  if (config.definitions.empty())
    throw std::invalid_argument("definitions must be nonempty");
}

long effective_generations(const ExperimentConfig& config) {
  if (config.generations > 0) return config.generations;
  return 2 * static_cast<long>(config.n) * swapping_q(config.epsilon);
}

Estimate estimate_robustness_on(const std::vector<Instance>& sample,
                                const Conjunction& h, const Conjunction& c,
                                AttackDefinition def) {
  if (sample.empty()) throw std::invalid_argument("empty evaluation sample");
  if (def == AttackDefinition::ErrorRegion && h.vars == c.vars)
    return Estimate{true, 0, 0};
  const DistanceEvaluator evaluate(h, c, def, sample.front().n);
  Accumulator acc;
  for (const Instance& x : sample) {
    const Distance d = evaluate(x);
    if (!d) {
      acc.infinite = true;
      break;
    }
    acc.add(static_cast<double>(*d));
  }
  return acc.finish();
}

Estimate estimate_robustness(const Conjunction& h, const Conjunction& c,
                             AttackDefinition def, long samples, unsigned n,
                             Prng& prng) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  std::vector<Instance> sample;
  sample.reserve(static_cast<std::size_t>(samples));
  for (long i = 0; i < samples; ++i) sample.push_back(sample_uniform(n, prng));
  return estimate_robustness_on(sample, h, c, def);
}

Estimate estimate_risk_on(const std::vector<Instance>& sample,
                          const Conjunction& h, const Conjunction& c,
                          AttackDefinition def, long r) {
  if (sample.empty()) throw std::invalid_argument("empty evaluation sample");
  if (r < 0) throw std::invalid_argument("negative budget");
  Accumulator acc;
  if (def == AttackDefinition::ErrorRegion && h.vars == c.vars) {
    for (const Instance& x : sample) {
      (void)x;
      acc.add(0.0);  // empty error region: no instance is attackable
    }
    return acc.finish();
  }
  const DistanceEvaluator evaluate(h, c, def, sample.front().n);
  for (const Instance& x : sample) {
    const Distance d = evaluate(x);
    acc.add(d && *d <= r ? 1.0 : 0.0);
  }
  return acc.finish();
}

Estimate estimate_risk(const Conjunction& h, const Conjunction& c,
                       AttackDefinition def, long r, long samples, unsigned n,
                       Prng& prng) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  std::vector<Instance> sample;
  sample.reserve(static_cast<std::size_t>(samples));
  for (long i = 0; i < samples; ++i) sample.push_back(sample_uniform(n, prng));
  return estimate_risk_on(sample, h, c, def, r);
}

long max_threads() {
  if (const char* env = std::getenv("HYPERBOUND_THREADS")) {
    const long cap = parse_long(trim(env));
    if (cap < 1)
      throw std::invalid_argument("HYPERBOUND_THREADS must be positive");
    return cap;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<long>(hw);
}

namespace {

RunRecord execute_run(const ExperimentConfig& config, long target_size,
                      long run_index, long generations) {
  Prng prng = Prng::substream(config.seed,
                              static_cast<std::uint64_t>(target_size),
                              static_cast<std::uint64_t>(run_index));

  // Uniform target of the requested size: partial Fisher-Yates prefix.
  std::vector<unsigned> pool(config.n);
  std::iota(pool.begin(), pool.end(), 0u);
  for (long i = 0; i < target_size; ++i) {
    const long j =
        i + static_cast<long>(prng.below(static_cast<std::uint64_t>(
                static_cast<long>(config.n) - i)));
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(j)]);
  }
  Conjunction target;
  target.vars.assign(pool.begin(), pool.begin() + target_size);
  std::sort(target.vars.begin(), target.vars.end());

  const Conjunction hypothesis =
      config.algorithm == Algorithm::FindS
          ? find_s(target, config.epsilon, config.delta, config.n, prng)
          : swapping_run(target, config.epsilon, config.delta, config.n,
                         generations, prng);

  std::vector<Instance> sample;
  sample.reserve(static_cast<std::size_t>(config.eval_samples));
  for (long i = 0; i < config.eval_samples; ++i)
    sample.push_back(sample_uniform(config.n, prng));

  RunRecord record;
  record.target_size = target_size;
  record.run_index = run_index;
  record.hypothesis_size = static_cast<long>(hypothesis.size());
  std::vector<unsigned> shared;
  std::set_intersection(hypothesis.vars.begin(), hypothesis.vars.end(),
                        target.vars.begin(), target.vars.end(),
                        std::back_inserter(shared));
  record.m = static_cast<long>(shared.size());
  record.u = static_cast<long>(target.size()) - record.m;
  record.w = static_cast<long>(hypothesis.size()) - record.m;
  for (AttackDefinition def : config.definitions)
    record.estimates.push_back(
        {def, estimate_robustness_on(sample, hypothesis, target, def)});
  return record;
}

}  // namespace

ExperimentResult run_experiment(
    const ExperimentConfig& config,
    const std::function<void(long, long)>& progress) {
  validate_config(config);
  const long generations = config.algorithm == Algorithm::Swapping
                               ? effective_generations(config)
                               : 0;

  const long sizes = static_cast<long>(config.target_sizes.size());
  const long total = sizes * config.runs;
  ExperimentResult result;
  result.config = config;
  result.records.resize(static_cast<std::size_t>(total));

  std::atomic<long> next_task{0};
  std::atomic<long> completed{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const long workers = std::min<long>(max_threads(), total);
  const auto work = [&] {
    for (;;) {
      const long task = next_task.fetch_add(1);
      if (task >= total) return;
      try {
        const long size_index = task / config.runs;
        const long run_index = task % config.runs;
        result.records[static_cast<std::size_t>(task)] = execute_run(
            config, config.target_sizes[static_cast<std::size_t>(size_index)],
            run_index, generations);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
      const long done = completed.fetch_add(1) + 1;
      if (progress) {
        const std::lock_guard<std::mutex> lock(progress_mutex);
        progress(done, total);
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (long i = 0; i < workers; ++i) threads.emplace_back(work);
    for (std::thread& thread : threads) thread.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(result.records.begin(), result.records.end(),
            [](const RunRecord& a, const RunRecord& b) {
              return std::tie(a.target_size, a.run_index) <
                     std::tie(b.target_size, b.run_index);
            });

  // Aggregates: finite mean + infinite count per definition, mean |h|.
  std::vector<long> sorted_sizes = config.target_sizes;
  std::sort(sorted_sizes.begin(), sorted_sizes.end());
  for (long size : sorted_sizes) {
    SizeAggregate aggregate;
    aggregate.target_size = size;
    double size_sum = 0;
    long size_count = 0;
    for (AttackDefinition def : config.definitions)
      aggregate.by_definition.push_back({def, 0, 0, 0});
    for (const RunRecord& record : result.records) {
      if (record.target_size != size) continue;
      size_sum += static_cast<double>(record.hypothesis_size);
      ++size_count;
      for (std::size_t d = 0; d < record.estimates.size(); ++d) {
        DefinitionAggregate& slot = aggregate.by_definition[d];
        const Estimate& estimate = record.estimates[d].estimate;
        if (estimate.infinite) {
          ++slot.infinite_runs;
        } else {
          ++slot.finite_runs;
          slot.finite_mean += estimate.mean;
        }
      }
    }
    aggregate.mean_hypothesis_size = size_sum / static_cast<double>(size_count);
    for (DefinitionAggregate& slot : aggregate.by_definition)
      if (slot.finite_runs > 0)
        slot.finite_mean /= static_cast<double>(slot.finite_runs);
    result.aggregates.push_back(std::move(aggregate));
  }
  return result;
}

namespace {

std::string fixed6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

}  // namespace

std::string algorithm_token(Algorithm algorithm) {
  return algorithm == Algorithm::FindS ? "finds" : "swapping";
}

std::string definition_token(AttackDefinition def) {
  switch (def) {
    case AttackDefinition::ErrorRegion:
      return "er";
    case AttackDefinition::PredictionChange:
      return "pc";
    case AttackDefinition::CorruptedInstance:
      return "ci";
  }
  return "?";
}

void write_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "algorithm,definition,n,target_size,run_index,hypothesis_size,"
         "m,u,w,mean_distance,infinite,stderr,seed\n";
  for (const RunRecord& record : result.records) {
    for (const DefinitionEstimate& entry : record.estimates) {
      const Estimate& estimate = entry.estimate;
      out << algorithm_token(result.config.algorithm) << ','
          << definition_token(entry.def) << ',' << result.config.n << ','
          << record.target_size << ',' << record.run_index << ','
          << record.hypothesis_size << ',' << record.m << ',' << record.u
          << ',' << record.w << ','
          << (estimate.infinite ? "" : fixed6(estimate.mean)) << ','
          << (estimate.infinite ? 1 : 0) << ','
          << fixed6(estimate.infinite ? 0.0 : estimate.stderr_) << ','
          << result.config.seed << '\n';
    }
  }
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace hyperbound
