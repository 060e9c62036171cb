#include "vqpm/engine.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "vqpm/io_util.hpp"

namespace vqpm {

namespace {

struct Peak {
  std::uint64_t index = 0;
  double probability = 0.0;
  bool unique = true;
};

Peak find_peak(const StateVector& state) {
  Peak peak;
  double second = 0.0;
  const auto& amps = state.amps();
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    const double p = std::norm(amps[x]);
    if (p > peak.probability) {
      second = peak.probability;
      peak.probability = p;
      peak.index = x;
    } else if (p > second) {
      second = p;
    }
  }
  peak.unique = second < peak.probability;
  return peak;
}

double target_mass(const StateVector& state, const std::vector<Bitstring>& targets) {
  double mass = 0.0;
  for (const Bitstring& t : targets) mass += state.probability(t.index());
  return mass / state.norm_squared();
}

void validate(const PhaseTable& table, const VqpmConfig& config) {
  if (table.n() != config.n)
    throw std::invalid_argument("run: phase table does not match config.n");
  if (config.max_iter < 1) throw std::invalid_argument("run: max_iter must be >= 1");
  if (config.precision < 1)
    throw std::invalid_argument("run: precision must be >= 1 decimal place");
  if (!(config.success_threshold > 0.0 && config.success_threshold <= 1.0))
    throw std::invalid_argument("run: success_threshold must be in (0, 1]");
  for (const Bitstring& t : config.targets)
    if (t.size() != config.n)
      throw std::invalid_argument("run: target bitstring size does not match n");
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::SuccessByProbability: return "SuccessByProbability";
    case Termination::SuccessByTarget: return "SuccessByTarget";
    case Termination::TargetEliminated: return "TargetEliminated";
    case Termination::MaxIterations: return "MaxIterations";
  }
  return "Unknown";
}

std::optional<Termination> check_termination(const StateVector& state, const VqpmConfig& config,
                                             std::optional<double> target_prob) {
  const Peak peak = find_peak(state);
  if (peak.probability >= config.success_threshold) {
    // The state has converged onto a single bitstring; report the stronger
    // verdict when that bitstring is a known optimum.  A bare argmax match
    // below the threshold is not convergence: one amplification step already
    // puts the ground state on top while its probability is still tiny.
    if (peak.unique && !config.targets.empty()) {
      const Bitstring found = Bitstring::from_index(peak.index, config.n);
      for (const Bitstring& t : config.targets)
        if (found == t) return Termination::SuccessByTarget;
    }
    return Termination::SuccessByProbability;
  }
  if (!config.targets.empty() && target_prob.has_value() && *target_prob == 0.0)
    return Termination::TargetEliminated;
  return std::nullopt;
}

RunResult run(const PhaseTable& table, const VqpmConfig& config, StateVector* final_state_out) {
  validate(table, config);
  const bool tracking = !config.targets.empty();

  StateVector state = StateVector::uniform(config.n);
  RunResult result;
  result.locks = LockRegister(config.n);
  result.trace.reserve(static_cast<std::size_t>(config.max_iter));
  result.termination = Termination::MaxIterations;

  StateVector final_state = state;
  for (int k = 1; k <= config.max_iter; ++k) {
    PowerStepResult step = apply_power_step(std::move(state), table);
    state = std::move(step.state);

    std::optional<double> target_prob;
    if (tracking) target_prob = target_mass(state, config.targets);

    IterationRecord rec;
    rec.iteration = k;
    rec.peak_probability = find_peak(state).probability;
    rec.target_probability = target_prob;
    rec.marginals = qubit_marginals(state, config.precision);
    rec.ancilla_zero_probability = step.ancilla_zero_probability;
    result.trace.push_back(std::move(rec));

    if (auto reason = check_termination(state, config, target_prob)) {
      result.termination = *reason;
      result.iterations_used = k;
      final_state = std::move(state);
      break;
    }

    if (config.mode == Mode::Exact) {
      if (k == config.max_iter) {
        result.iterations_used = k;
        final_state = std::move(state);
        break;
      }
      continue;
    }

    LockDecision decision =
        decide_locks(result.trace.back().marginals, config.policy, std::move(result.locks), k);
    result.locks = std::move(decision.locks);
    result.trace.back().lock_events = std::move(decision.events);

    StateVector rebuilt = product_state_from_marginals(result.trace.back().marginals, result.locks);
    if (tracking && target_mass(rebuilt, config.targets) == 0.0) {
      // A pinned or rounded-away bit just wiped out every known optimum; the
      // product rebuild can never bring it back, so the run is lost now.
      result.termination = Termination::TargetEliminated;
      result.iterations_used = k;
      final_state = std::move(rebuilt);
      break;
    }

    if (k == config.max_iter) {
      // Report from the evolved state of the last iteration; the rebuild
      // above only mattered for the elimination check.
      result.iterations_used = k;
      final_state = std::move(state);
      break;
    }
    state = std::move(rebuilt);
  }

  const Peak peak = find_peak(final_state);
  result.found = Bitstring::from_index(peak.index, config.n);
  result.found_probability = peak.probability;
  if (tracking) {
    result.target_probability = target_mass(final_state, config.targets);
    int best = static_cast<int>(config.n) + 1;
    for (const Bitstring& t : config.targets)
      best = std::min(best, hamming_distance(result.found, t));
    result.hamming_to_target = best;
    result.near_zero_target_warning =
        *result.target_probability > 0.0 && *result.target_probability < 1e-12;
  }
  if (final_state_out) *final_state_out = std::move(final_state);
  return result;
}

void write_trace_csv(std::ostream& out, const RunResult& result) {
  out << "iteration,p_min,target_prob,ancilla_p0,locks_so_far,lock_events\n";
  std::size_t locks_so_far = 0;
  for (const IterationRecord& rec : result.trace) {
    locks_so_far += rec.lock_events.size();
    out << rec.iteration << "," << format_double(rec.peak_probability) << ",";
    if (rec.target_probability) out << format_double(*rec.target_probability);
    out << "," << format_double(rec.ancilla_zero_probability) << "," << locks_so_far << ",";
    for (std::size_t i = 0; i < rec.lock_events.size(); ++i) {
      if (i) out << ";";
      out << rec.lock_events[i].qubit << ":" << rec.lock_events[i].bit;
    }
    out << "\n";
  }
}

}  // namespace vqpm
