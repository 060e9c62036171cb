#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vqpm/bits.hpp"
#include "vqpm/lock_policy.hpp"
#include "vqpm/phase_sim.hpp"

namespace vqpm {

enum class Mode {
  Exact,        ///< pure power iteration; the state vector just evolves
  Variational,  ///< measure, lock, and rebuild a product state each iteration
};

enum class Termination {
  SuccessByProbability,  ///< peak basis probability reached success_threshold
  SuccessByTarget,       ///< unique peak sits on a known optimal bitstring
  TargetEliminated,      ///< every known optimum carries exactly zero mass
  MaxIterations,         ///< budget exhausted without any of the above
};

const char* to_string(Termination t);

struct VqpmConfig {
  std::size_t n = 1;
  int max_iter = 30;
  ThresholdPolicy policy = FixedThreshold{0.01};
  int precision = 3;             ///< decimals the marginals are rounded to
  Mode mode = Mode::Variational;
  double success_threshold = 0.5;
  /// Known optimal bitstrings (usually from brute_force_solve; several when
  /// the optimum is degenerate).  Empty disables all target bookkeeping.
  std::vector<Bitstring> targets;
};

/// Everything observed in one iteration, after the power step.
struct IterationRecord {
  int iteration = 0;                  ///< 1-based
  double peak_probability = 0.0;      ///< max basis-state probability
  std::optional<double> target_probability;
  QubitMarginals marginals;           ///< rounded, as fed to the lock decision
  std::vector<LockEvent> lock_events; ///< locks taken this iteration
  double ancilla_zero_probability = 0.0;
};

struct RunResult {
  Bitstring found;                    ///< argmax-probability bitstring of the final state
  double found_probability = 0.0;
  std::optional<double> target_probability;
  std::optional<int> hamming_to_target;  ///< min distance from `found` to any target
  int iterations_used = 0;
  Termination termination = Termination::MaxIterations;
  std::vector<IterationRecord> trace;
  LockRegister locks;                 ///< final lock register
  /// Target mass ended up positive but below 1e-12: numerically alive, but
  /// close enough to zero that elimination may be imminent.
  bool near_zero_target_warning = false;
};

/// Decide whether the run is over.  A peak basis probability at or above the
/// success threshold ends the run: as SuccessByTarget when the unique peak is
/// a known optimum, as SuccessByProbability otherwise.  Failing that, a
/// target mass of exactly zero ends it as TargetEliminated.  target_prob is
/// the mass on the target set, when known.
std::optional<Termination> check_termination(const StateVector& state, const VqpmConfig& config,
                                             std::optional<double> target_prob);

/// Run the full loop from the uniform state: power step, rounded marginals,
/// termination check, then (Variational mode) lock decisions and a
/// product-state rebuild that pins locked qubits.  Deterministic: marginals
/// are exact probabilities plus rounding, nothing is sampled.
/// When final_state_out is non-null it receives the state the result was
/// read from (kept out of RunResult so batch runs don't retain 2^n
/// amplitudes per trial).
RunResult run(const PhaseTable& table, const VqpmConfig& config,
              StateVector* final_state_out = nullptr);

/// Trace as CSV: iteration,p_min,target_prob,ancilla_p0,locks_so_far,lock_events.
/// p_min is the iteration's peak basis probability; lock_events is a
/// semicolon-joined list of q:bit pairs; optional fields are left empty.
void write_trace_csv(std::ostream& out, const RunResult& result);

}  // namespace vqpm
