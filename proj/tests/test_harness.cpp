// Config parsing, Monte Carlo estimators, and the experiment driver.
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hyperbound/conjunction.hpp"
#include "hyperbound/exact.hpp"
#include "hyperbound/harness.hpp"

namespace hb = hyperbound;
using hb::AttackDefinition;

namespace {

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  REQUIRE(out.good());
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void expect_config_error(const std::string& name, const std::string& content,
                         const std::string& needle) {
  const std::string path = write_file(name, content);
  try {
    hb::load_config(path);
    CHECK_MESSAGE(false, "expected a parse failure for ", name);
  } catch (const std::runtime_error& error) {
    const std::string message = error.what();
    CHECK_MESSAGE(message.find(needle) != std::string::npos,
                  "message '", message, "' lacks '", needle, "'");
  }
}

}  // namespace

TEST_CASE("config files parse comments, ranges, and every key") {
  const std::string path = write_file("hb_cfg_full.cfg",
                                      "# experiment sweep\n"
                                      "algorithm = swapping\n"
                                      "n = 40   # ambient dimension\n"
                                      "epsilon = 0.02\n"
                                      "delta = 1/20\n"
                                      "target_sizes = 1-4, 8,25\n"
                                      "\n"
                                      "runs = 7\n"
                                      "eval_samples = 123\n"
                                      "generations = 99\n"
                                      "seed = 18446744073709551615\n"
                                      "definitions = all\n");
  const hb::ExperimentConfig config = hb::load_config(path);
  CHECK(config.algorithm == hb::Algorithm::Swapping);
  CHECK(config.n == 40);
  CHECK(config.epsilon == hb::Rational(1, 50));
  CHECK(config.delta == hb::Rational(1, 20));
  CHECK(config.target_sizes == std::vector<long>{1, 2, 3, 4, 8, 25});
  CHECK(config.runs == 7);
  CHECK(config.eval_samples == 123);
  CHECK(config.generations == 99);
  CHECK(config.seed == 18446744073709551615ull);
  REQUIRE(config.definitions.size() == 3);
  CHECK(config.definitions[0] == AttackDefinition::ErrorRegion);
  CHECK(config.definitions[1] == AttackDefinition::PredictionChange);
  CHECK(config.definitions[2] == AttackDefinition::CorruptedInstance);
}

TEST_CASE("defaults survive a minimal config") {
  const std::string path =
      write_file("hb_cfg_minimal.cfg", "target_sizes = 3\n");
  const hb::ExperimentConfig config = hb::load_config(path);
  CHECK(config.n == 100);
  CHECK(config.epsilon == hb::Rational(1, 100));
  CHECK(config.delta == hb::Rational(1, 20));
  CHECK(config.algorithm == hb::Algorithm::FindS);
  CHECK(config.runs == 50);
  CHECK(config.eval_samples == 2000);
  CHECK(config.seed == 0);
  CHECK(config.generations == 0);
  CHECK(config.definitions.size() == 3);
}

TEST_CASE("config errors carry file and line context") {
  expect_config_error("hb_cfg_unknown.cfg",
                      "n = 10\nfoo = 3\ntarget_sizes = 1\n",
                      "hb_cfg_unknown.cfg:2: unknown key 'foo'");
  expect_config_error("hb_cfg_repeat.cfg",
                      "n = 10\nn = 11\ntarget_sizes = 1\n",
                      ":2: repeated key 'n'");
  expect_config_error("hb_cfg_noequals.cfg", "target_sizes = 1\nruns\n",
                      ":2: expected key = value");
  expect_config_error("hb_cfg_badnum.cfg",
                      "target_sizes = 1\nruns = soon\n", ":2: ");
  expect_config_error("hb_cfg_badrange.cfg", "target_sizes = 9-2\n",
                      ":1: empty range");
  expect_config_error("hb_cfg_baddef.cfg",
                      "target_sizes = 1\ndefinitions = er,zz\n",
                      "unknown definition 'zz'");
  expect_config_error("hb_cfg_dupdef.cfg",
                      "target_sizes = 1\ndefinitions = pc,all\n",
                      "duplicate definition");
  // Validation failures from a parsed file still name the file.
  expect_config_error("hb_cfg_range.cfg", "n = 4\ntarget_sizes = 1,9\n",
                      "hb_cfg_range.cfg: target size 9 outside [1, n]");
  CHECK_THROWS_AS(hb::load_config("/tmp/hb_no_such_file.cfg"),
                  std::runtime_error);
}

TEST_CASE("validate_config rejects out-of-range fields") {
  hb::ExperimentConfig good;
  good.target_sizes = {1, 2};
  CHECK_NOTHROW(hb::validate_config(good));

  hb::ExperimentConfig config = good;
  config.epsilon = hb::Rational(1);
  CHECK_THROWS_AS(hb::validate_config(config), std::invalid_argument);
  config = good;
  config.delta = hb::Rational(0);
  CHECK_THROWS_AS(hb::validate_config(config), std::invalid_argument);
  config = good;
  config.runs = 0;
  CHECK_THROWS_AS(hb::validate_config(config), std::invalid_argument);
  config = good;
  config.eval_samples = 0;
  CHECK_THROWS_AS(hb::validate_config(config), std::invalid_argument);
  config = good;
  config.target_sizes = {};
  CHECK_THROWS_AS(hb::validate_config(config), std::invalid_argument);
  config = good;
  config.target_sizes = {2, 2};
  CHECK_THROWS_AS(hb::validate_config(config), std::invalid_argument);
  config = good;
  config.target_sizes = {0};
  CHECK_THROWS_AS(hb::validate_config(config), std::invalid_argument);
  config = good;
  config.target_sizes = {101};
  CHECK_THROWS_AS(hb::validate_config(config), std::invalid_argument);
  config = good;
  config.definitions = {};
  CHECK_THROWS_AS(hb::validate_config(config), std::invalid_argument);
  config = good;
  config.generations = -1;
  CHECK_THROWS_AS(hb::validate_config(config), std::invalid_argument);
}

TEST_CASE("generations default to twice n times the size cap") {
  hb::ExperimentConfig config;
  config.target_sizes = {1};
  CHECK(hb::effective_generations(config) == 1600);  // q(1/100) = 8, n = 100
  config.generations = 500;
  CHECK(hb::effective_generations(config) == 500);
}

TEST_CASE("robustness estimates converge to the exact expectations") {
  const unsigned n = 14;
  const hb::Conjunction h = hb::conjunction_from({0, 1}, n);
  const hb::Conjunction c = hb::conjunction_from({0, 2}, n);
  const hb::ConjunctionStructure s = hb::classify(h, c, n);
  const long samples = 4000;
  for (AttackDefinition def :
       {AttackDefinition::ErrorRegion, AttackDefinition::PredictionChange,
        AttackDefinition::CorruptedInstance}) {
    hb::Prng prng(777);
    const hb::Estimate estimate =
        hb::estimate_robustness(h, c, def, samples, n, prng);
    CHECK_FALSE(estimate.infinite);
    CHECK(estimate.stderr_ > 0);
    const double exact =
        std::stod(hb::render_decimal(*hb::robustness_exact(def, s), 17));
    CHECK(std::abs(estimate.mean - exact) <= 5 * estimate.stderr_);
  }
  // Identical hypothesis and target: no error region to reach.
  hb::Prng prng(1);
  const hb::Estimate same = hb::estimate_robustness(
      h, h, AttackDefinition::ErrorRegion, 10, n, prng);
  CHECK(same.infinite);
}

TEST_CASE("risk estimates track the exact masses") {
  const unsigned n = 14;
  const hb::Conjunction h = hb::conjunction_from({0, 1}, n);
  const hb::Conjunction c = hb::conjunction_from({0, 2}, n);
  const hb::ConjunctionStructure s = hb::classify(h, c, n);
  const long samples = 4000;
  struct Case {
    AttackDefinition def;
    long r;
  };
  for (const Case& test : {Case{AttackDefinition::ErrorRegion, 0},
                           Case{AttackDefinition::PredictionChange, 1},
                           Case{AttackDefinition::CorruptedInstance, 0}}) {
    hb::Prng prng(4242);
    const hb::Estimate estimate =
        hb::estimate_risk(h, c, test.def, test.r, samples, n, prng);
    CHECK_FALSE(estimate.infinite);
    const double exact =
        std::stod(hb::render_decimal(hb::risk_exact(test.def, s, test.r), 17));
    CHECK(std::abs(estimate.mean - exact) <= 5 * estimate.stderr_ + 1e-12);
  }
  // h = c leaves the error region empty at every budget.
  hb::Prng prng(9);
  const hb::Estimate none = hb::estimate_risk(
      h, h, AttackDefinition::ErrorRegion, 14, 100, n, prng);
  CHECK_FALSE(none.infinite);
  CHECK(none.mean == 0.0);
}

TEST_CASE("the constant-true hypothesis resolves by target value") {
  const unsigned n = 6;
  const hb::Conjunction empty;  // accepts everything
  const hb::Conjunction c = hb::conjunction_from({0, 1}, n);
  hb::Instance negative = hb::Instance::zeros(n);
  hb::Instance positive = hb::Instance::zeros(n);
  positive.set(0, true);
  positive.set(1, true);

  // Error region: already inside it when the target is false, one flip away
  // when the target is true.
  const hb::Estimate er = hb::estimate_robustness_on(
      {negative, positive}, empty, c, AttackDefinition::ErrorRegion);
  CHECK_FALSE(er.infinite);
  CHECK(er.mean == 0.5);

  // Prediction change: a constant hypothesis never flips.
  const hb::Estimate pc = hb::estimate_robustness_on(
      {negative}, empty, c, AttackDefinition::PredictionChange);
  CHECK(pc.infinite);

  // Corrupted instance: negatives are misclassified in place; a sampled
  // positive has no reachable corruption.
  const hb::Estimate ci_neg = hb::estimate_robustness_on(
      {negative}, empty, c, AttackDefinition::CorruptedInstance);
  CHECK_FALSE(ci_neg.infinite);
  CHECK(ci_neg.mean == 0.0);
  const hb::Estimate ci_mixed = hb::estimate_robustness_on(
      {negative, positive}, empty, c, AttackDefinition::CorruptedInstance);
  CHECK(ci_mixed.infinite);

  // Risk counts unreachable instances as failures rather than infinities.
  const hb::Estimate pc_risk = hb::estimate_risk_on(
      {negative, positive}, empty, c, AttackDefinition::PredictionChange, 6);
  CHECK_FALSE(pc_risk.infinite);
  CHECK(pc_risk.mean == 0.0);
}

TEST_CASE("a single evaluation sample has zero standard error") {
  const unsigned n = 10;
  const hb::Conjunction h = hb::conjunction_from({0}, n);
  const hb::Conjunction c = hb::conjunction_from({1}, n);
  hb::Prng prng(3);
  const hb::Estimate estimate = hb::estimate_robustness(
      h, c, AttackDefinition::PredictionChange, 1, n, prng);
  CHECK(estimate.stderr_ == 0.0);
}

TEST_CASE("experiment records are ordered, shaped, and aggregated") {
  hb::ExperimentConfig config;
  config.n = 12;
  config.epsilon = hb::Rational(1, 4);
  config.delta = hb::Rational(1, 4);
  config.target_sizes = {2, 1};  // aggregation sorts sizes
  config.runs = 3;
  config.eval_samples = 30;
  config.seed = 5;
  const hb::ExperimentResult result = hb::run_experiment(config);

  REQUIRE(result.records.size() == 6);
  std::vector<std::pair<long, long>> order;
  for (const hb::RunRecord& record : result.records) {
    order.emplace_back(record.target_size, record.run_index);
    CHECK(record.m + record.u == record.target_size);
    CHECK(record.m + record.w == record.hypothesis_size);
    CHECK(record.u == 0);  // specialization keeps the target inside h
    REQUIRE(record.estimates.size() == 3);
    CHECK(record.estimates[0].def == AttackDefinition::ErrorRegion);
    CHECK(record.estimates[1].def == AttackDefinition::PredictionChange);
    CHECK(record.estimates[2].def == AttackDefinition::CorruptedInstance);
    // Error-region attacks are unreachable exactly when h identified c.
    CHECK(record.estimates[0].estimate.infinite ==
          (record.u == 0 && record.w == 0));
    CHECK_FALSE(record.estimates[1].estimate.infinite);
    CHECK_FALSE(record.estimates[2].estimate.infinite);
  }
  const std::vector<std::pair<long, long>> expected_order = {
      {1, 0}, {1, 1}, {1, 2}, {2, 0}, {2, 1}, {2, 2}};
  CHECK(order == expected_order);

  REQUIRE(result.aggregates.size() == 2);
  for (std::size_t i = 0; i < result.aggregates.size(); ++i) {
    const hb::SizeAggregate& aggregate = result.aggregates[i];
    CHECK(aggregate.target_size == static_cast<long>(i) + 1);
    double h_sum = 0;
    for (const hb::RunRecord& record : result.records)
      if (record.target_size == aggregate.target_size)
        h_sum += static_cast<double>(record.hypothesis_size);
    CHECK(aggregate.mean_hypothesis_size == h_sum / 3.0);
    REQUIRE(aggregate.by_definition.size() == 3);
    for (const hb::DefinitionAggregate& slot : aggregate.by_definition)
      CHECK(slot.finite_runs + slot.infinite_runs == 3);
  }
}

namespace {

const char* const kFindsConfig =
    "algorithm = finds\n"
    "n = 16\n"
    "epsilon = 0.25\n"
    "delta = 0.25\n"
    "target_sizes = 2,3\n"
    "runs = 2\n"
    "eval_samples = 50\n"
    "seed = 3\n"
    "definitions = er,pc,ci\n";

const char* const kFindsCsv =
    "algorithm,definition,n,target_size,run_index,hypothesis_size,m,u,w,"
    "mean_distance,infinite,stderr,seed\n"
    "finds,er,16,2,0,2,2,0,0,,1,0.000000,3\n"
    "finds,pc,16,2,0,2,2,0,0,1.240000,0,0.061012,3\n"
    "finds,ci,16,2,0,2,2,0,0,1.240000,0,0.061012,3\n"
    "finds,er,16,2,1,2,2,0,0,,1,0.000000,3\n"
    "finds,pc,16,2,1,2,2,0,0,1.240000,0,0.061012,3\n"
    "finds,ci,16,2,1,2,2,0,0,1.240000,0,0.061012,3\n"
    "finds,er,16,3,0,3,3,0,0,,1,0.000000,3\n"
    "finds,pc,16,3,0,3,3,0,0,1.680000,0,0.104745,3\n"
    "finds,ci,16,3,0,3,3,0,0,1.680000,0,0.104745,3\n"
    "finds,er,16,3,1,3,3,0,0,,1,0.000000,3\n"
    "finds,pc,16,3,1,3,3,0,0,1.520000,0,0.107817,3\n"
    "finds,ci,16,3,1,3,3,0,0,1.520000,0,0.107817,3\n";

const char* const kSwappingConfig =
    "algorithm = swapping\n"
    "n = 16\n"
    "epsilon = 0.25\n"
    "delta = 0.25\n"
    "target_sizes = 3\n"
    "runs = 2\n"
    "eval_samples = 40\n"
    "generations = 64\n"
    "seed = 11\n"
    "definitions = er,pc,ci\n";

const char* const kSwappingCsv =
    "algorithm,definition,n,target_size,run_index,hypothesis_size,m,u,w,"
    "mean_distance,infinite,stderr,seed\n"
    "swapping,er,16,3,0,3,3,0,0,,1,0.000000,11\n"
    "swapping,pc,16,3,0,3,3,0,0,1.625000,0,0.105536,11\n"
    "swapping,ci,16,3,0,3,3,0,0,1.625000,0,0.105536,11\n"
    "swapping,er,16,3,1,3,3,0,0,,1,0.000000,11\n"
    "swapping,pc,16,3,1,3,3,0,0,1.600000,0,0.117670,11\n"
    "swapping,ci,16,3,1,3,3,0,0,1.600000,0,0.117670,11\n";

}  // namespace

TEST_CASE("a specialization experiment reproduces its frozen output") {
  const std::string cfg = write_file("hb_golden_finds.cfg", kFindsConfig);
  const hb::ExperimentResult result = hb::run_experiment(hb::load_config(cfg));
  const std::string out = "/tmp/hb_golden_finds.csv";
  hb::write_csv(result, out);
  CHECK(read_file(out) == kFindsCsv);
}

TEST_CASE("a local-search experiment reproduces its frozen output") {
  const std::string cfg = write_file("hb_golden_swap.cfg", kSwappingConfig);
  const hb::ExperimentResult result = hb::run_experiment(hb::load_config(cfg));
  const std::string out = "/tmp/hb_golden_swap.csv";
  hb::write_csv(result, out);
  CHECK(read_file(out) == kSwappingCsv);
}

TEST_CASE("the worker cap reads and validates the environment") {
  unsetenv("HYPERBOUND_THREADS");
  CHECK(hb::max_threads() >= 1);
  setenv("HYPERBOUND_THREADS", "4", 1);
  CHECK(hb::max_threads() == 4);
  setenv("HYPERBOUND_THREADS", "0", 1);
  CHECK_THROWS_AS(hb::max_threads(), std::invalid_argument);
  setenv("HYPERBOUND_THREADS", "quick", 1);
  CHECK_THROWS_AS(hb::max_threads(), std::invalid_argument);
  unsetenv("HYPERBOUND_THREADS");
}

TEST_CASE("results are identical for any worker count") {
  const std::string cfg = write_file("hb_threads.cfg", kFindsConfig);
  const hb::ExperimentConfig config = hb::load_config(cfg);

  setenv("HYPERBOUND_THREADS", "1", 1);
  hb::write_csv(hb::run_experiment(config), "/tmp/hb_threads_1.csv");
  setenv("HYPERBOUND_THREADS", "4", 1);
  hb::write_csv(hb::run_experiment(config), "/tmp/hb_threads_4.csv");
  unsetenv("HYPERBOUND_THREADS");

  const std::string serial = read_file("/tmp/hb_threads_1.csv");
  CHECK(serial == read_file("/tmp/hb_threads_4.csv"));
  CHECK(serial == kFindsCsv);
}

TEST_CASE("csv writing fails loudly on an unwritable path") {
  hb::ExperimentResult result;
  try {
    hb::write_csv(result, "/tmp/hb_missing_dir/out.csv");
    CHECK(false);
  } catch (const std::runtime_error& error) {
    CHECK(std::string(error.what()).find("/tmp/hb_missing_dir/out.csv") !=
          std::string::npos);
  }
}

TEST_CASE("tokens match the documented csv vocabulary") {
  CHECK(hb::algorithm_token(hb::Algorithm::FindS) == "finds");
  CHECK(hb::algorithm_token(hb::Algorithm::Swapping) == "swapping");
  CHECK(hb::definition_token(AttackDefinition::ErrorRegion) == "er");
  CHECK(hb::definition_token(AttackDefinition::PredictionChange) == "pc");
  CHECK(hb::definition_token(AttackDefinition::CorruptedInstance) == "ci");
}

TEST_CASE("estimates sit within five standard errors across an ensemble") {
  // Structures small enough for exact expectations, three definitions, and
  // two dozen seeds each: the sampled mean must land within five standard
  // errors of the exact robustness in at least 99% of trials.
  struct Shape {
    unsigned m, u, w;
  };
  const Shape shapes[] = {{1, 1, 1}, {2, 1, 1}, {3, 2, 1}};
  const AttackDefinition defs[] = {AttackDefinition::ErrorRegion,
                                   AttackDefinition::PredictionChange,
                                   AttackDefinition::CorruptedInstance};
  long trials = 0;
  long violations = 0;
  for (std::size_t shape_index = 0; shape_index < 3; ++shape_index) {
    const Shape& shape = shapes[shape_index];
    const unsigned n = shape.m + shape.u + shape.w;
    std::vector<unsigned> c_vars;
    std::vector<unsigned> h_vars;
    for (unsigned i = 0; i < shape.m; ++i) {
      c_vars.push_back(i);
      h_vars.push_back(i);
    }
    for (unsigned i = 0; i < shape.u; ++i) c_vars.push_back(shape.m + i);
    for (unsigned i = 0; i < shape.w; ++i) h_vars.push_back(shape.m + shape.u + i);
    const hb::Conjunction c = hb::conjunction_from(c_vars, n);
    const hb::Conjunction h = hb::conjunction_from(h_vars, n);
    const hb::ConjunctionStructure s = hb::classify(h, c, n);
    for (std::size_t def_index = 0; def_index < 3; ++def_index) {
      const auto exact = hb::robustness_exact(defs[def_index], s);
      REQUIRE(exact.has_value());
      const double expectation = std::stod(hb::render_decimal(*exact, 17));
      for (std::uint64_t seed = 0; seed < 23; ++seed) {
        hb::Prng prng =
            hb::Prng::substream(662607, shape_index * 3 + def_index, seed);
        const hb::Estimate estimate =
            hb::estimate_robustness(h, c, defs[def_index], 1500, n, prng);
        REQUIRE_FALSE(estimate.infinite);
        ++trials;
        violations +=
            std::abs(estimate.mean - expectation) > 5 * estimate.stderr_;
      }
    }
  }
  CHECK(trials == 207);
  CHECK(violations * 100 <= trials);
}
