#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vqpm/engine.hpp"
#include "vqpm/harness.hpp"
#include "vqpm/io_util.hpp"
#include "vqpm/lock_policy.hpp"
#include "vqpm/qubo.hpp"

namespace {

struct EngineCliOptions {
  int max_iter = 30;
  std::string policy = "fixed:0.01";
  int precision = 3;
  std::string mode = "variational";
  double success_threshold = 0.5;
};

void add_engine_options(CLI::App* cmd, EngineCliOptions* opts) {
  cmd->add_option("--max-iter", opts->max_iter, "Iteration budget per run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--policy", opts->policy,
                  "Locking policy: fixed:P, none, decay:p0=..,floor=..[,law=pow2|linear], "
                  "hoeffding:delta=..,M=..[,clamp=lo:hi], hoeffding+influence[:..], "
                  "bitsig:p=..[,scale=..]")
      ->capture_default_str();
  cmd->add_option("--precision", opts->precision, "Decimals the marginals are rounded to")
      ->check(CLI::Range(1, 12))
      ->capture_default_str();
  cmd->add_option("--mode", opts->mode, "variational (lock and rebuild) or exact (pure power iteration)")
      ->check(CLI::IsMember({"variational", "exact"}))
      ->capture_default_str();
  cmd->add_option("--success-threshold", opts->success_threshold,
                  "Peak-probability level that ends a run as a success")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

vqpm::EngineSettings to_engine_settings(const EngineCliOptions& opts) {
  vqpm::EngineSettings engine;
  engine.max_iter = opts.max_iter;
  engine.policy = opts.policy;
  engine.precision = opts.precision;
  engine.mode = opts.mode == "exact" ? vqpm::Mode::Exact : vqpm::Mode::Variational;
  engine.success_threshold = opts.success_threshold;
  return engine;
}

vqpm::Interval parse_range(const std::string& text) {
  const auto parts = vqpm::split(text, ':');
  if (parts.size() != 2)
    throw CLI::ValidationError("--range", "expected lo:hi, got '" + text + "'");
  vqpm::Interval range;
  range.lo = vqpm::parse_double(vqpm::trim(parts[0]));
  range.hi = vqpm::parse_double(vqpm::trim(parts[1]));
  if (!(range.lo <= range.hi))
    throw CLI::ValidationError("--range", "lo must not exceed hi");
  return range;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

void emit_summary(const vqpm::SummaryStats& stats, const std::string& summary_path) {
  vqpm::write_summary(std::cout, stats);
  if (!summary_path.empty()) {
    std::ofstream out = open_out(summary_path);
    vqpm::write_summary(out, stats);
  }
}

int run_experiment(const vqpm::ExperimentSpec& spec, const std::string& out_path,
                   const std::string& summary_path) {
  const std::vector<vqpm::TrialRecord> records = vqpm::run_batch(spec);
  {
    std::ofstream out = open_out(out_path);
    vqpm::write_trials_csv(out, records);
  }
  std::cout << "wrote " << records.size() << " trial records to " << out_path << "\n";
  emit_summary(vqpm::summarize(records), summary_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational quantum power method simulator for QUBO problems"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file (flags override it)");
  app.get_config_formatter_base()->comment('#');

  // --- run ---------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "Run seeded trials at a single problem size");
  std::size_t run_n = 15;
  int trials = 100;
  std::uint64_t seed = 42;
  std::string range_text = "-1:1";
  bool no_oracle = false;
  std::size_t oracle_cap = 20;
  std::string out_path = "trials.csv";
  std::string summary_path;
  EngineCliOptions engine_opts;
  run_cmd->add_option("--n", run_n, "Number of binary variables")->required()->check(CLI::PositiveNumber);
  run_cmd->add_option("--trials", trials, "Instances per problem size")->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_option("--seed", seed, "Base seed; per-trial seeds derive from it")->capture_default_str();
  run_cmd->add_option("--range", range_text, "Coefficient range lo:hi")->capture_default_str();
  run_cmd->add_flag("--no-oracle", no_oracle, "Skip exhaustive solving (drops target columns)");
  run_cmd->add_option("--oracle-cap", oracle_cap, "Largest n the oracle will enumerate")->capture_default_str();
  run_cmd->add_option("--out", out_path, "Trial CSV path")->capture_default_str();
  run_cmd->add_option("--summary", summary_path, "Also write the summary table to this file");
  add_engine_options(run_cmd, &engine_opts);

  // --- sweep -------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "Run seeded trials over a range of problem sizes");
  std::string sweep_n = "1..18";
  sweep_cmd->add_option("--n", sweep_n, "Sizes: \"1..18\" or \"4,6,8\"")->required();
  sweep_cmd->add_option("--trials", trials, "Instances per problem size")->check(CLI::PositiveNumber)->capture_default_str();
  sweep_cmd->add_option("--seed", seed, "Base seed; per-trial seeds derive from it")->capture_default_str();
  sweep_cmd->add_option("--range", range_text, "Coefficient range lo:hi")->capture_default_str();
  sweep_cmd->add_flag("--no-oracle", no_oracle, "Skip exhaustive solving (drops target columns)");
  sweep_cmd->add_option("--oracle-cap", oracle_cap, "Largest n the oracle will enumerate")->capture_default_str();
  sweep_cmd->add_option("--out", out_path, "Trial CSV path")->capture_default_str();
  sweep_cmd->add_option("--summary", summary_path, "Also write the summary table to this file");
  add_engine_options(sweep_cmd, &engine_opts);

  // --- compare -----------------------------------------------------------
  auto* compare_cmd = app.add_subcommand("compare", "Pair VQPM against the layered-circuit baseline");
  std::string compare_n = "4";
  std::size_t qaoa_p = 8;
  int qaoa_evals = 2000;
  int qaoa_restarts = 5;
  std::string pairs_path = "pairs.csv";
  compare_cmd->add_option("--n", compare_n, "Sizes: single value, \"4,6\", or \"4..6\"")->capture_default_str();
  compare_cmd->add_option("--trials", trials, "Instances per problem size")->check(CLI::PositiveNumber)->capture_default_str();
  compare_cmd->add_option("--seed", seed, "Base seed; per-trial seeds derive from it")->capture_default_str();
  compare_cmd->add_option("--range", range_text, "Coefficient range lo:hi")->capture_default_str();
  compare_cmd->add_option("--qaoa-p", qaoa_p, "Baseline layer count")->check(CLI::PositiveNumber)->capture_default_str();
  compare_cmd->add_option("--qaoa-evals", qaoa_evals, "Baseline objective-evaluation budget")->check(CLI::PositiveNumber)->capture_default_str();
  compare_cmd->add_option("--qaoa-restarts", qaoa_restarts, "Baseline optimizer restarts")->check(CLI::PositiveNumber)->capture_default_str();
  compare_cmd->add_option("--out", pairs_path, "Paired CSV path")->capture_default_str();
  compare_cmd->add_option("--summary", summary_path, "Also write the summary table to this file");
  add_engine_options(compare_cmd, &engine_opts);

  // --- analyze -----------------------------------------------------------
  auto* analyze_cmd = app.add_subcommand("analyze", "Summarize an existing trial CSV");
  std::string in_path;
  std::string analyze_out;
  analyze_cmd->add_option("--in", in_path, "Trial CSV to read")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--out", analyze_out, "Also write the summary table to this file");

  // --- solve -------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "Run one instance from a file");
  std::string instance_path;
  std::string target_text;
  std::string trace_path;
  std::string dump_path;
  solve_cmd->add_option("--instance", instance_path, "Instance file (first line n, then \"i j value\")")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--target", target_text, "Known optimal bitstring (variable 0 leftmost); default: brute force");
  solve_cmd->add_flag("--no-oracle", no_oracle, "Do not brute-force a target");
  solve_cmd->add_option("--oracle-cap", oracle_cap, "Largest n the oracle will enumerate")->capture_default_str();
  solve_cmd->add_option("--trace", trace_path, "Write the per-iteration trace CSV here");
  solve_cmd->add_option("--dump-state", dump_path, "Write the final state ('index real imag' lines) here");
  add_engine_options(solve_cmd, &engine_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    vqpm::ExperimentSpec spec;
    spec.trials_per_n = trials;
    spec.base_seed = seed;
    spec.engine = to_engine_settings(engine_opts);
    spec.coeff_range = parse_range(range_text);
    spec.use_oracle = !no_oracle;
    spec.oracle_cap = oracle_cap;

    if (run_cmd->parsed()) {
      spec.n_values = {run_n};
      return run_experiment(spec, out_path, summary_path);
    }
    if (sweep_cmd->parsed()) {
      spec.n_values = vqpm::parse_n_values(sweep_n);
      return run_experiment(spec, out_path, summary_path);
    }
    if (compare_cmd->parsed()) {
      spec.n_values = vqpm::parse_n_values(compare_n);
      vqpm::QaoaSettings qaoa;
      qaoa.p = qaoa_p;
      qaoa.max_evals = qaoa_evals;
      qaoa.restarts = qaoa_restarts;
      spec.qaoa = qaoa;
      const vqpm::ComparisonResult result = vqpm::compare_vqpm_qaoa(spec);
      {
        std::ofstream out = open_out(pairs_path);
        vqpm::write_pairs_csv(out, result.pairs);
      }
      std::cout << "wrote " << result.pairs.size() << " paired records to " << pairs_path << "\n";
      vqpm::write_comparison_summary(std::cout, result);
      if (!summary_path.empty()) {
        std::ofstream out = open_out(summary_path);
        vqpm::write_comparison_summary(out, result);
      }
      return 0;
    }
    if (analyze_cmd->parsed()) {
      std::ifstream in(in_path);
      if (!in) throw std::runtime_error("cannot open '" + in_path + "'");
      const std::vector<vqpm::TrialRecord> records = vqpm::read_trials_csv(in);
      emit_summary(vqpm::summarize(records), analyze_out);
      return 0;
    }
    if (solve_cmd->parsed()) {
      const vqpm::QuboInstance instance = vqpm::load_instance(instance_path);

      vqpm::PolicyContext ctx;
      ctx.n = instance.n();
      ctx.max_iter = engine_opts.max_iter;
      ctx.influence = vqpm::influence_scores(instance);

      vqpm::VqpmConfig config;
      config.n = instance.n();
      config.max_iter = engine_opts.max_iter;
      config.policy = vqpm::make_policy(engine_opts.policy, ctx);
      config.precision = engine_opts.precision;
      config.mode = engine_opts.mode == "exact" ? vqpm::Mode::Exact : vqpm::Mode::Variational;
      config.success_threshold = engine_opts.success_threshold;
      if (!target_text.empty()) {
        vqpm::Bitstring target = vqpm::Bitstring::parse(target_text);
        if (target.size() != instance.n())
          throw std::runtime_error("--target length does not match the instance");
        config.targets = {target};
      } else if (!no_oracle && instance.n() <= oracle_cap) {
        config.targets = vqpm::brute_force_solve(instance, oracle_cap).argmin;
      }

      const vqpm::PhaseTable table = vqpm::build_phase_table(instance);
      vqpm::StateVector final_state = vqpm::StateVector::uniform(instance.n());
      const vqpm::RunResult result = vqpm::run(table, config, &final_state);

      std::cout << "n            " << instance.n() << "\n"
                << "termination  " << vqpm::to_string(result.termination) << "\n"
                << "iterations   " << result.iterations_used << "\n"
                << "found        " << result.found.str() << "\n"
                << "probability  " << vqpm::format_double(result.found_probability) << "\n"
                << "energy       " << vqpm::format_double(vqpm::energy(instance, result.found))
                << "\n"
                << "locked       " << result.locks.locked_count() << "/" << instance.n() << "\n";
      if (result.target_probability)
        std::cout << "target_prob  " << vqpm::format_double(*result.target_probability) << "\n";
      if (result.near_zero_target_warning)
        std::cout << "warning      target probability is positive but below 1e-12\n";

      if (!trace_path.empty()) {
        std::ofstream out = open_out(trace_path);
        vqpm::write_trace_csv(out, result);
      }
      if (!dump_path.empty()) {
        std::ofstream out = open_out(dump_path);
        vqpm::dump_state(out, final_state);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
