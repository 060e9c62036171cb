#include "vqpm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vqpm/io_util.hpp"
#include "vqpm/lock_policy.hpp"
#include "vqpm/rng.hpp"

namespace vqpm {

namespace {

// Tag mixed into a trial seed to derive the baseline optimizer's seed, so the
// two solvers never share a random stream ("qaoa" in ASCII).
constexpr std::uint64_t kBaselineSeedTag = 0x71616f61ULL;

struct TrialInputs {
  QuboInstance instance;
  std::optional<OracleResult> oracle;
  PhaseTable table;
  VqpmConfig config;
};

TrialInputs prepare_trial(const ExperimentSpec& spec, std::size_t n, std::uint64_t seed) {
  QuboInstance instance = generate_random(n, seed, spec.coeff_range);

  std::optional<OracleResult> oracle;
  if (spec.use_oracle) {
    if (n > spec.oracle_cap)
      throw std::invalid_argument("run_batch: n = " + std::to_string(n) +
                                  " exceeds the oracle cap; pass --no-oracle for large n");
    oracle = brute_force_solve(instance, spec.oracle_cap);
  }

  PolicyContext ctx;
  ctx.n = n;
  ctx.max_iter = spec.engine.max_iter;
  ctx.influence = influence_scores(instance);

  VqpmConfig config;
  config.n = n;
  config.max_iter = spec.engine.max_iter;
  config.policy = make_policy(spec.engine.policy, ctx);
  config.precision = spec.engine.precision;
  config.mode = spec.engine.mode;
  config.success_threshold = spec.engine.success_threshold;
  if (oracle) config.targets = oracle->argmin;

  PhaseTable table = build_phase_table(instance);
  return TrialInputs{std::move(instance), std::move(oracle), std::move(table), std::move(config)};
}

int count_wrong_locks(const RunResult& result, const std::vector<Bitstring>& targets) {
  int wrong = 0;
  for (const IterationRecord& rec : result.trace)
    for (const LockEvent& event : rec.lock_events) {
      bool kills_all = true;
      for (const Bitstring& t : targets)
        if (t.bit(event.qubit) == event.bit) {
          kills_all = false;
          break;
        }
      if (kills_all) ++wrong;
    }
  return wrong;
}

int count_lock_events(const RunResult& result) {
  int count = 0;
  for (const IterationRecord& rec : result.trace)
    count += static_cast<int>(rec.lock_events.size());
  return count;
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.n_values.empty())
    throw std::invalid_argument("experiment: no problem sizes given");
  if (spec.trials_per_n < 1)
    throw std::invalid_argument("experiment: trials_per_n must be >= 1");
  for (std::size_t n : spec.n_values)
    if (n == 0 || n > kMaxQubits)
      throw std::invalid_argument("experiment: n must be in 1.." + std::to_string(kMaxQubits));
}

/// Run `body(task_index)` for every index in [0, count) on `threads` workers.
/// The first exception wins and is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t n, int trial) {
  std::uint64_t s = splitmix64(base_seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(n));
  s = splitmix64(s ^ static_cast<std::uint64_t>(trial));
  return s;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("VQPM_THREADS")) {
    try {
      const std::uint64_t cap = parse_uint(env);
      if (cap >= 1 && cap < hw) hw = static_cast<unsigned>(cap);
    } catch (const std::runtime_error&) {
      throw std::invalid_argument("VQPM_THREADS must be a positive integer");
    }
  }
  return hw;
}

std::vector<std::size_t> parse_n_values(const std::string& text) {
  std::vector<std::size_t> values;
  const std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t lo = parse_uint(trim(text.substr(0, dots)));
    const std::uint64_t hi = parse_uint(trim(text.substr(dots + 2)));
    if (lo == 0 || hi < lo)
      throw std::invalid_argument("n range: need 1 <= lo <= hi, got '" + text + "'");
    for (std::uint64_t n = lo; n <= hi; ++n) values.push_back(static_cast<std::size_t>(n));
    return values;
  }
  for (const std::string& field : split(text, ',')) {
    const std::uint64_t n = parse_uint(trim(field));
    if (n == 0) throw std::invalid_argument("n range: sizes must be positive");
    values.push_back(static_cast<std::size_t>(n));
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) throw std::invalid_argument("n range: empty");
  return values;
}

std::vector<TrialRecord> run_batch(const ExperimentSpec& spec) {
  validate_spec(spec);
  std::vector<std::size_t> sizes = spec.n_values;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  const std::size_t trials = static_cast<std::size_t>(spec.trials_per_n);
  std::vector<TrialRecord> records(sizes.size() * trials);
  parallel_for(records.size(), resolve_threads(spec.threads), [&](std::size_t task) {
    const std::size_t n = sizes[task / trials];
    const int trial = static_cast<int>(task % trials);
    const std::uint64_t seed = trial_seed(spec.base_seed, n, trial);

    TrialInputs inputs = prepare_trial(spec, n, seed);
    const RunResult result = run(inputs.table, inputs.config);

    TrialRecord& rec = records[task];
    rec.n = n;
    rec.trial = trial;
    rec.seed = seed;
    rec.termination = result.termination;
    rec.found_probability = result.found_probability;
    rec.target_probability = result.target_probability;
    rec.hamming_to_target = result.hamming_to_target;
    rec.iterations_used = result.iterations_used;
    rec.lock_events = count_lock_events(result);
    if (inputs.oracle) {
      rec.eigengap = inputs.oracle->eigengap;
      rec.wrong_locks = count_wrong_locks(result, inputs.oracle->argmin);
    }
  });
  return records;
}

SummaryStats summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  std::map<std::size_t, std::vector<const TrialRecord*>> by_n;
  for (const TrialRecord& rec : records) by_n[rec.n].push_back(&rec);

  SummaryStats stats;
  for (const auto& [n, group] : by_n) {
    SummaryRow row;
    row.n = n;
    row.trials = static_cast<int>(group.size());
    double target_sum = 0.0, hamming_sum = 0.0, iter_sum = 0.0;
    int target_count = 0, hamming_count = 0, optimum_count = 0;
    for (const TrialRecord* rec : group) {
      iter_sum += rec->iterations_used;
      if (rec->target_probability) {
        target_sum += *rec->target_probability;
        ++target_count;
      }
      if (rec->hamming_to_target) {
        hamming_sum += *rec->hamming_to_target;
        ++hamming_count;
        if (*rec->hamming_to_target == 0) ++optimum_count;
      }
    }
    row.mean_iterations = iter_sum / static_cast<double>(group.size());
    if (target_count > 0) row.mean_target_probability = target_sum / target_count;
    if (hamming_count > 0) {
      row.mean_hamming = hamming_sum / hamming_count;
      row.fraction_optimum = static_cast<double>(optimum_count) / hamming_count;
    }
    stats.per_n.push_back(row);
  }
  return stats;
}

ComparisonResult compare_vqpm_qaoa(const ExperimentSpec& spec) {
  validate_spec(spec);
  if (!spec.qaoa) throw std::invalid_argument("compare: baseline settings missing");
  if (!spec.use_oracle)
    throw std::invalid_argument("compare: needs the oracle for target probabilities");

  std::vector<std::size_t> sizes = spec.n_values;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  const std::size_t trials = static_cast<std::size_t>(spec.trials_per_n);
  ComparisonResult result;
  result.pairs.resize(sizes.size() * trials);
  std::mutex clock_mutex;

  parallel_for(result.pairs.size(), resolve_threads(spec.threads), [&](std::size_t task) {
    const std::size_t n = sizes[task / trials];
    const int trial = static_cast<int>(task % trials);
    const std::uint64_t seed = trial_seed(spec.base_seed, n, trial);
    TrialInputs inputs = prepare_trial(spec, n, seed);

    const auto vqpm_start = std::chrono::steady_clock::now();
    const RunResult vqpm = run(inputs.table, inputs.config);
    const auto vqpm_stop = std::chrono::steady_clock::now();

    OptimizerConfig opt;
    opt.max_evals = spec.qaoa->max_evals;
    opt.restarts = spec.qaoa->restarts;
    opt.seed = splitmix64(seed ^ kBaselineSeedTag);
    const QaoaOptimum qaoa = optimize_qaoa(inputs.table, spec.qaoa->p, opt, inputs.config.targets);
    const auto qaoa_stop = std::chrono::steady_clock::now();

    PairedRecord& pair = result.pairs[task];
    pair.n = n;
    pair.trial = trial;
    pair.seed = seed;
    pair.eigengap = inputs.oracle->eigengap;
    pair.vqpm_termination = vqpm.termination;
    pair.vqpm_target_probability = vqpm.target_probability.value_or(0.0);
    pair.vqpm_iterations = vqpm.iterations_used;
    pair.qaoa_p = spec.qaoa->p;
    pair.qaoa_evals = qaoa.evals_used;
    pair.qaoa_expected_phase = qaoa.expected_phase;
    pair.qaoa_target_probability = qaoa.target_probability;

    std::lock_guard<std::mutex> hold(clock_mutex);
    result.vqpm_seconds += std::chrono::duration<double>(vqpm_stop - vqpm_start).count();
    result.qaoa_seconds += std::chrono::duration<double>(qaoa_stop - vqpm_stop).count();
  });

  for (std::size_t i = 0; i < sizes.size(); ++i) {
    ComparisonSummaryRow row;
    row.n = sizes[i];
    row.trials = static_cast<int>(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      row.vqpm_mean_target_probability += result.pairs[i * trials + t].vqpm_target_probability;
      row.qaoa_mean_target_probability += result.pairs[i * trials + t].qaoa_target_probability;
    }
    row.vqpm_mean_target_probability /= static_cast<double>(trials);
    row.qaoa_mean_target_probability /= static_cast<double>(trials);
    result.per_n.push_back(row);
  }
  return result;
}

namespace {

template <typename T>
std::string opt_field(const std::optional<T>& value) {
  if (!value) return "";
  if constexpr (std::is_same_v<T, double>) return format_double(*value);
  else return std::to_string(*value);
}

}  // namespace

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "n,trial,seed,eigengap,termination,found_probability,target_probability,"
         "hamming_to_target,iterations_used,lock_events,wrong_locks\n";
  for (const TrialRecord& rec : records) {
    out << rec.n << "," << rec.trial << "," << rec.seed << "," << opt_field(rec.eigengap) << ","
        << to_string(rec.termination) << "," << format_double(rec.found_probability) << ","
        << opt_field(rec.target_probability) << "," << opt_field(rec.hamming_to_target) << ","
        << rec.iterations_used << "," << rec.lock_events << "," << opt_field(rec.wrong_locks)
        << "\n";
  }
}

Termination termination_from_string(const std::string& name) {
  if (name == "SuccessByProbability") return Termination::SuccessByProbability;
  if (name == "SuccessByTarget") return Termination::SuccessByTarget;
  if (name == "TargetEliminated") return Termination::TargetEliminated;
  if (name == "MaxIterations") return Termination::MaxIterations;
  throw std::invalid_argument("unknown termination '" + name + "'");
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("trials csv: empty input");
  if (trim(line) !=
      "n,trial,seed,eigengap,termination,found_probability,target_probability,"
      "hamming_to_target,iterations_used,lock_events,wrong_locks")
    throw std::runtime_error("trials csv: unexpected header");

  std::vector<TrialRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(trim(line), ',');
    if (f.size() != 11)
      throw std::runtime_error("trials csv: line " + std::to_string(line_no) +
                               ": expected 11 fields, got " + std::to_string(f.size()));
    try {
      TrialRecord rec;
      rec.n = static_cast<std::size_t>(parse_uint(f[0]));
      rec.trial = static_cast<int>(parse_uint(f[1]));
      rec.seed = parse_uint(f[2]);
      if (!f[3].empty()) rec.eigengap = parse_double(f[3]);
      rec.termination = termination_from_string(f[4]);
      rec.found_probability = parse_double(f[5]);
      if (!f[6].empty()) rec.target_probability = parse_double(f[6]);
      if (!f[7].empty()) rec.hamming_to_target = static_cast<int>(parse_uint(f[7]));
      rec.iterations_used = static_cast<int>(parse_uint(f[8]));
      rec.lock_events = static_cast<int>(parse_uint(f[9]));
      if (!f[10].empty()) rec.wrong_locks = static_cast<int>(parse_uint(f[10]));
      records.push_back(rec);
    } catch (const std::exception& e) {
      throw std::runtime_error("trials csv: line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_pairs_csv(std::ostream& out, const std::vector<PairedRecord>& pairs) {
  out << "n,trial,seed,eigengap,vqpm_termination,vqpm_target_probability,vqpm_iterations,"
         "qaoa_p,qaoa_evals,qaoa_expected_phase,qaoa_target_probability\n";
  for (const PairedRecord& pair : pairs) {
    out << pair.n << "," << pair.trial << "," << pair.seed << "," << opt_field(pair.eigengap)
        << "," << to_string(pair.vqpm_termination) << ","
        << format_double(pair.vqpm_target_probability) << "," << pair.vqpm_iterations << ","
        << pair.qaoa_p << "," << pair.qaoa_evals << "," << format_double(pair.qaoa_expected_phase)
        << "," << format_double(pair.qaoa_target_probability) << "\n";
  }
}

namespace {

std::string fixed4(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(4);
  s << v;
  return s.str();
}

}  // namespace

void write_summary(std::ostream& out, const SummaryStats& stats) {
  out << "   n  trials  mean_target_prob  mean_hamming  frac_optimum  mean_iters\n";
  for (const SummaryRow& row : stats.per_n) {
    auto cell = [](const std::optional<double>& v) { return v ? fixed4(*v) : std::string("-"); };
    out << std::string(row.n < 10 ? 3 : 2, ' ') << row.n << "  " << row.trials << "\t"
        << cell(row.mean_target_probability) << "\t\t" << cell(row.mean_hamming) << "\t      "
        << cell(row.fraction_optimum) << "\t    " << fixed4(row.mean_iterations) << "\n";
  }
}

void write_comparison_summary(std::ostream& out, const ComparisonResult& result) {
  out << "   n  trials  vqpm_mean_target  qaoa_mean_target\n";
  for (const ComparisonSummaryRow& row : result.per_n) {
    out << std::string(row.n < 10 ? 3 : 2, ' ') << row.n << "  " << row.trials << "\t"
        << fixed4(row.vqpm_mean_target_probability) << "\t\t  "
        << fixed4(row.qaoa_mean_target_probability) << "\n";
  }
  out << "solver time: vqpm " << fixed4(result.vqpm_seconds) << " s, baseline "
      << fixed4(result.qaoa_seconds) << " s\n";
}

}  // namespace vqpm
