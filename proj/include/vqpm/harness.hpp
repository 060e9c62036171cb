#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vqpm/engine.hpp"
#include "vqpm/qaoa.hpp"
#include "vqpm/qubo.hpp"

namespace vqpm {

/// Engine parameters shared by every trial of an experiment.  The policy is
/// kept as its string form because per-instance context (influence scores)
/// is only known once each instance exists.
struct EngineSettings {
  int max_iter = 30;
  std::string policy = "fixed:0.01";
  int precision = 3;
  Mode mode = Mode::Variational;
  double success_threshold = 0.5;
};

struct QaoaSettings {
  std::size_t p = 8;
  int max_evals = 2000;
  int restarts = 5;
};

struct ExperimentSpec {
  std::vector<std::size_t> n_values;
  int trials_per_n = 100;
  std::uint64_t base_seed = 42;
  EngineSettings engine;
  std::optional<QaoaSettings> qaoa;  ///< required by compare_vqpm_qaoa only
  Interval coeff_range{-1.0, 1.0};
  bool use_oracle = true;            ///< brute-force each instance for targets
  std::size_t oracle_cap = 20;       ///< refuse exhaustive solving above this n
  unsigned threads = 0;              ///< 0: hardware count, capped by VQPM_THREADS
};

/// One engine run over one seeded instance.  Optional fields are absent when
/// the oracle was skipped.
struct TrialRecord {
  std::size_t n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::optional<double> eigengap;   ///< spectrum gap between the two lowest energies
  Termination termination = Termination::MaxIterations;
  double found_probability = 0.0;
  std::optional<double> target_probability;
  std::optional<int> hamming_to_target;
  int iterations_used = 0;
  int lock_events = 0;
  std::optional<int> wrong_locks;   ///< locks that ruled out every optimal bitstring
};

struct SummaryRow {
  std::size_t n = 0;
  int trials = 0;
  std::optional<double> mean_target_probability;
  std::optional<double> mean_hamming;
  std::optional<double> fraction_optimum;  ///< trials whose found state is optimal
  double mean_iterations = 0.0;
};

struct SummaryStats {
  std::vector<SummaryRow> per_n;
};

/// VQPM and the layered-circuit baseline on the same instance.
struct PairedRecord {
  std::size_t n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::optional<double> eigengap;
  Termination vqpm_termination = Termination::MaxIterations;
  double vqpm_target_probability = 0.0;
  int vqpm_iterations = 0;
  std::size_t qaoa_p = 0;
  int qaoa_evals = 0;
  double qaoa_expected_phase = 0.0;
  double qaoa_target_probability = 0.0;
};

struct ComparisonSummaryRow {
  std::size_t n = 0;
  int trials = 0;
  double vqpm_mean_target_probability = 0.0;
  double qaoa_mean_target_probability = 0.0;
};

struct ComparisonResult {
  std::vector<PairedRecord> pairs;
  std::vector<ComparisonSummaryRow> per_n;
  /// Accumulated solver time per method, for the human-readable summary only;
  /// timing never goes into CSV, which must be byte-stable across runs.
  double vqpm_seconds = 0.0;
  double qaoa_seconds = 0.0;
};

/// Deterministic per-trial seed: a SplitMix64 chain over (base_seed, n,
/// trial), so a trial's instance does not depend on which other trials run.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t n, int trial);

/// Worker count actually used: `requested` if nonzero, otherwise the
/// hardware count capped by the VQPM_THREADS environment variable.
unsigned resolve_threads(unsigned requested);

/// Parse "15", "4,6,8", or "1..18" into a sorted list of sizes.
std::vector<std::size_t> parse_n_values(const std::string& text);

/// Run trials_per_n seeded instances for every n: generate, brute-force the
/// optimum (unless disabled), run the engine, and collect one record each.
/// Records come back sorted by (n, trial) no matter how workers finish.
std::vector<TrialRecord> run_batch(const ExperimentSpec& spec);

/// Exact per-n means over the records.  Throws std::invalid_argument on
/// empty input.
SummaryStats summarize(const std::vector<TrialRecord>& records);

/// Feed the identical instance set to VQPM and the layered baseline;
/// pair the per-trial outcomes and compute per-method means.
ComparisonResult compare_vqpm_qaoa(const ExperimentSpec& spec);

/// CSV: n,trial,seed,eigengap,termination,found_probability,
/// target_probability,hamming_to_target,iterations_used,lock_events,
/// wrong_locks.  Optional fields are written as empty; numbers use the
/// shortest round-trip form so identical runs give identical bytes.
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_trials_csv(std::istream& in);

/// CSV: n,trial,seed,eigengap,vqpm_termination,vqpm_target_probability,
/// vqpm_iterations,qaoa_p,qaoa_evals,qaoa_expected_phase,
/// qaoa_target_probability.
void write_pairs_csv(std::ostream& out, const std::vector<PairedRecord>& pairs);

/// Human-readable per-n summary table.
void write_summary(std::ostream& out, const SummaryStats& stats);
void write_comparison_summary(std::ostream& out, const ComparisonResult& result);

Termination termination_from_string(const std::string& name);

}  // namespace vqpm
