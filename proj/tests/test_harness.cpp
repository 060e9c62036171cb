#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "vqpm/harness.hpp"
#include "vqpm/rng.hpp"

using namespace vqpm;

namespace {

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.n_values = {3};
  spec.trials_per_n = 4;
  spec.base_seed = 42;
  return spec;
}

std::string trials_csv_of(const ExperimentSpec& spec) {
  std::stringstream out;
  write_trials_csv(out, run_batch(spec));
  return out.str();
}

}  // namespace

TEST_CASE("trial seeds are a deterministic mix of base, size, and index") {
  const std::uint64_t expected = splitmix64(splitmix64(splitmix64(42) ^ 5) ^ 7);
  CHECK(trial_seed(42, 5, 7) == expected);
  CHECK(trial_seed(42, 5, 7) == trial_seed(42, 5, 7));

  // no collisions over a small grid
  std::vector<std::uint64_t> seen;
  for (std::size_t n = 1; n <= 6; ++n)
    for (int t = 0; t < 20; ++t) seen.push_back(trial_seed(42, n, t));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("parse_n_values accepts singletons, lists, and ranges") {
  CHECK(parse_n_values("15") == std::vector<std::size_t>{15});
  CHECK(parse_n_values("4,6,8") == std::vector<std::size_t>{4, 6, 8});
  CHECK(parse_n_values("8,4,6,4") == std::vector<std::size_t>{4, 6, 8});
  CHECK(parse_n_values("1..5") == std::vector<std::size_t>{1, 2, 3, 4, 5});
  CHECK(parse_n_values(" 2 .. 3 ") == std::vector<std::size_t>{2, 3});

  CHECK_THROWS_AS(parse_n_values(""), std::runtime_error);
  CHECK_THROWS_AS(parse_n_values("abc"), std::runtime_error);
  CHECK_THROWS_AS(parse_n_values("0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_n_values("5..3"), std::invalid_argument);
}

TEST_CASE("resolve_threads prefers the explicit request, else a capped hardware count") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(1) == 1);

  setenv("VQPM_THREADS", "1", 1);
  CHECK(resolve_threads(0) == 1);
  setenv("VQPM_THREADS", "junk", 1);
  CHECK_THROWS_AS(resolve_threads(0), std::invalid_argument);
  unsetenv("VQPM_THREADS");
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("run_batch produces one consistent record per (n, trial)") {
  ExperimentSpec spec = tiny_spec();
  std::vector<TrialRecord> records = run_batch(spec);
  REQUIRE(records.size() == 4);

  for (int t = 0; t < 4; ++t) {
    const TrialRecord& r = records[static_cast<std::size_t>(t)];
    CHECK(r.n == 3);
    CHECK(r.trial == t);
    CHECK(r.seed == trial_seed(42, 3, t));
    CHECK(r.found_probability >= 0.0);
    CHECK(r.found_probability <= 1.0 + 1e-12);
    REQUIRE(r.eigengap.has_value());
    CHECK(*r.eigengap >= 0.0);
    REQUIRE(r.target_probability.has_value());
    REQUIRE(r.hamming_to_target.has_value());
    CHECK(*r.hamming_to_target >= 0);
    CHECK(*r.hamming_to_target <= 3);
    REQUIRE(r.wrong_locks.has_value());
    CHECK(r.iterations_used >= 1);
    CHECK(r.iterations_used <= spec.engine.max_iter);
    CHECK(r.lock_events >= *r.wrong_locks);
  }
}

TEST_CASE("skipping the oracle drops every target-derived field") {
  ExperimentSpec spec = tiny_spec();
  spec.use_oracle = false;
  std::vector<TrialRecord> records = run_batch(spec);
  for (const TrialRecord& r : records) {
    CHECK_FALSE(r.eigengap.has_value());
    CHECK_FALSE(r.target_probability.has_value());
    CHECK_FALSE(r.hamming_to_target.has_value());
    CHECK_FALSE(r.wrong_locks.has_value());
  }
}

TEST_CASE("the oracle cap is enforced with a pointer to the escape hatch") {
  ExperimentSpec spec = tiny_spec();
  spec.oracle_cap = 2;
  CHECK_THROWS_WITH_AS(static_cast<void>(run_batch(spec)),
                       doctest::Contains("--no-oracle"), std::invalid_argument);
}

TEST_CASE("run_batch validates its spec") {
  ExperimentSpec empty;
  empty.n_values = {};
  CHECK_THROWS_AS(static_cast<void>(run_batch(empty)), std::invalid_argument);

  ExperimentSpec zero = tiny_spec();
  zero.trials_per_n = 0;
  CHECK_THROWS_AS(static_cast<void>(run_batch(zero)), std::invalid_argument);

  ExperimentSpec huge = tiny_spec();
  huge.n_values = {40};
  CHECK_THROWS_AS(static_cast<void>(run_batch(huge)), std::invalid_argument);
}

TEST_CASE("a batch is reproducible byte for byte") {
  ExperimentSpec spec = tiny_spec();
  CHECK(trials_csv_of(spec) == trials_csv_of(spec));
}

TEST_CASE("records do not depend on which other sizes run alongside") {
  ExperimentSpec both = tiny_spec();
  both.n_values = {2, 3};
  ExperimentSpec alone = tiny_spec();
  alone.n_values = {3};

  std::vector<TrialRecord> all_records = run_batch(both);
  std::vector<TrialRecord> solo = run_batch(alone);

  std::vector<TrialRecord> n3(all_records.begin() + 4, all_records.end());
  REQUIRE(n3.size() == solo.size());
  for (std::size_t i = 0; i < solo.size(); ++i) {
    CHECK(n3[i].seed == solo[i].seed);
    CHECK(n3[i].found_probability == solo[i].found_probability);
    CHECK(n3[i].iterations_used == solo[i].iterations_used);
  }
}

TEST_CASE("worker count does not change the output bytes") {
  ExperimentSpec one = tiny_spec();
  one.n_values = {2, 3};
  one.threads = 1;
  ExperimentSpec three = one;
  three.threads = 3;
  CHECK(trials_csv_of(one) == trials_csv_of(three));
}

TEST_CASE("flat instances make every state optimal") {
  ExperimentSpec spec = tiny_spec();
  spec.n_values = {4};
  spec.trials_per_n = 2;
  spec.coeff_range = {0.0, 0.0};
  std::vector<TrialRecord> records = run_batch(spec);
  for (const TrialRecord& r : records) {
    CHECK(r.eigengap == 0.0);
    CHECK(r.termination == Termination::MaxIterations);
    CHECK(*r.target_probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*r.hamming_to_target == 0);
    CHECK(r.lock_events == 0);
  }
  SummaryStats stats = summarize(records);
  REQUIRE(stats.per_n.size() == 1);
  CHECK(*stats.per_n[0].fraction_optimum == 1.0);
  CHECK(*stats.per_n[0].mean_target_probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("summarize averages exactly what the records say") {
  TrialRecord a;
  a.n = 4;
  a.trial = 0;
  a.target_probability = 0.5;
  a.hamming_to_target = 0;
  a.iterations_used = 3;
  TrialRecord b = a;
  b.trial = 1;
  b.target_probability = 0.25;
  b.hamming_to_target = 2;
  b.iterations_used = 5;

  SummaryStats stats = summarize({a, b});
  REQUIRE(stats.per_n.size() == 1);
  const SummaryRow& row = stats.per_n[0];
  CHECK(row.n == 4);
  CHECK(row.trials == 2);
  CHECK(*row.mean_target_probability == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(*row.mean_hamming == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*row.fraction_optimum == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(row.mean_iterations == doctest::Approx(4.0).epsilon(1e-15));

  CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("summarize leaves means absent when the records carry no oracle data") {
  TrialRecord bare;
  bare.n = 2;
  bare.iterations_used = 7;
  SummaryStats stats = summarize({bare});
  CHECK_FALSE(stats.per_n[0].mean_target_probability.has_value());
  CHECK_FALSE(stats.per_n[0].mean_hamming.has_value());
  CHECK_FALSE(stats.per_n[0].fraction_optimum.has_value());
  CHECK(stats.per_n[0].mean_iterations == 7.0);
}

TEST_CASE("trials CSV: exact header and a lossless round trip") {
  ExperimentSpec spec = tiny_spec();
  std::vector<TrialRecord> records = run_batch(spec);

  std::stringstream out;
  write_trials_csv(out, records);
  std::string text = out.str();
  CHECK(text.rfind("n,trial,seed,eigengap,termination,found_probability,target_probability,"
                   "hamming_to_target,iterations_used,lock_events,wrong_locks\n",
                   0) == 0);

  std::stringstream in(text);
  std::vector<TrialRecord> back = read_trials_csv(in);
  std::stringstream out2;
  write_trials_csv(out2, back);
  CHECK(out2.str() == text);
}

TEST_CASE("trials CSV reader rejects malformed input with line numbers") {
  std::stringstream empty("");
  CHECK_THROWS_AS(read_trials_csv(empty), std::runtime_error);

  std::stringstream wrong_header("a,b,c\n");
  CHECK_THROWS_AS(read_trials_csv(wrong_header), std::runtime_error);

  std::stringstream short_row(
      "n,trial,seed,eigengap,termination,found_probability,target_probability,"
      "hamming_to_target,iterations_used,lock_events,wrong_locks\n"
      "3,0,1\n");
  try {
    read_trials_csv(short_row);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("termination strings round-trip") {
  for (Termination t : {Termination::SuccessByProbability, Termination::SuccessByTarget,
                        Termination::TargetEliminated, Termination::MaxIterations}) {
    CHECK(termination_from_string(to_string(t)) == t);
  }
  CHECK_THROWS_AS(termination_from_string("???"), std::invalid_argument);
}

TEST_CASE("comparison runs both methods on identical instances") {
  ExperimentSpec spec = tiny_spec();
  spec.trials_per_n = 2;
  QaoaSettings qaoa;
  qaoa.p = 2;
  qaoa.max_evals = 80;
  qaoa.restarts = 2;
  spec.qaoa = qaoa;

  ComparisonResult result = compare_vqpm_qaoa(spec);
  REQUIRE(result.pairs.size() == 2);
  REQUIRE(result.per_n.size() == 1);
  CHECK(result.per_n[0].n == 3);
  CHECK(result.per_n[0].trials == 2);

  std::vector<TrialRecord> vqpm_records = run_batch(spec);
  for (std::size_t i = 0; i < result.pairs.size(); ++i) {
    const PairedRecord& p = result.pairs[i];
    CHECK(p.seed == vqpm_records[i].seed);  // same instances on both sides
    CHECK(p.vqpm_target_probability == *vqpm_records[i].target_probability);
    CHECK(p.qaoa_p == 2);
    CHECK(p.qaoa_evals <= 80);
    CHECK(p.qaoa_target_probability >= 0.0);
    CHECK(p.qaoa_target_probability <= 1.0 + 1e-12);
  }

  // means match the pairs
  double vq = 0.0;
  double qa = 0.0;
  for (const PairedRecord& p : result.pairs) {
    vq += p.vqpm_target_probability;
    qa += p.qaoa_target_probability;
  }
  CHECK(result.per_n[0].vqpm_mean_target_probability == doctest::Approx(vq / 2).epsilon(1e-12));
  CHECK(result.per_n[0].qaoa_mean_target_probability == doctest::Approx(qa / 2).epsilon(1e-12));
}

TEST_CASE("comparison output is reproducible and its CSV hides the timings") {
  ExperimentSpec spec = tiny_spec();
  spec.trials_per_n = 2;
  spec.qaoa = QaoaSettings{2, 60, 2};

  auto csv_of = [&spec]() {
    std::stringstream out;
    write_pairs_csv(out, compare_vqpm_qaoa(spec).pairs);
    return out.str();
  };
  std::string first = csv_of();
  CHECK(first == csv_of());
  CHECK(first.rfind("n,trial,seed,eigengap,vqpm_termination,vqpm_target_probability,"
                    "vqpm_iterations,qaoa_p,qaoa_evals,qaoa_expected_phase,"
                    "qaoa_target_probability\n",
                    0) == 0);
  CHECK(first.find("seconds") == std::string::npos);
}

TEST_CASE("comparison requires baseline settings and the oracle") {
  ExperimentSpec spec = tiny_spec();
  CHECK_THROWS_AS(compare_vqpm_qaoa(spec), std::invalid_argument);  // no qaoa block

  spec.qaoa = QaoaSettings{2, 50, 1};
  spec.use_oracle = false;
  CHECK_THROWS_AS(compare_vqpm_qaoa(spec), std::invalid_argument);
}

TEST_CASE("summary tables render one row per size") {
  ExperimentSpec spec = tiny_spec();
  SummaryStats stats = summarize(run_batch(spec));
  std::stringstream out;
  write_summary(out, stats);
  CHECK(out.str().find("mean_hamming") != std::string::npos);
  CHECK(out.str().find("\n   3") != std::string::npos);

  spec.trials_per_n = 1;
  spec.qaoa = QaoaSettings{1, 30, 1};
  std::stringstream cmp;
  write_comparison_summary(cmp, compare_vqpm_qaoa(spec));
  CHECK(cmp.str().find("vqpm_mean_target") != std::string::npos);
}
