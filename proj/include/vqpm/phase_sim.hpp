#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "vqpm/bits.hpp"
#include "vqpm/lock_register.hpp"
#include "vqpm/qubo.hpp"

namespace vqpm {

/// States with more qubits than this are refused up front; 2^26 complex
/// amplitudes is already a gigabyte.
inline constexpr std::size_t kMaxQubits = 26;

/// Eigenphase lambda_x in [0, pi/2] for every bitstring index x of a diagonal
/// unitary U = diag(e^{i lambda_x}).  build_phase_table() places instance
/// energies in this range by an affine rescale against cheap energy bounds;
/// the minimum-energy bitstring gets the smallest phase (not necessarily 0,
/// since the bounds are not tight).
class PhaseTable {
 public:
  PhaseTable(std::size_t n, std::vector<double> phases);

  std::size_t n() const { return n_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_; }
  double phase(std::uint64_t x) const { return phases_[x]; }
  const std::vector<double>& phases() const { return phases_; }

 private:
  std::size_t n_;
  std::vector<double> phases_;
};

/// Map instance energies E(x) onto phases lambda_x = (E(x) - lower) / span *
/// pi/2, where [lower, upper] are the cheap bounds from energy_bounds().  A
/// span of zero (all-zero instance) maps every state to phase 0.
/// Throws ResourceLimitError when n exceeds max_n.
PhaseTable build_phase_table(const QuboInstance& q, std::size_t max_n = kMaxQubits);

/// Dense 2^n-amplitude state.  Amplitudes are indexed by bitstring index;
/// qubit i lives in bit i (least significant first).
class StateVector {
 public:
  static StateVector uniform(std::size_t n);
  static StateVector basis(std::size_t n, std::uint64_t index);
  static StateVector from_amplitudes(std::size_t n, std::vector<std::complex<double>> amps);

  std::size_t n() const { return n_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_; }

  std::complex<double> amp(std::uint64_t x) const { return amps_[x]; }
  void set_amp(std::uint64_t x, std::complex<double> a) { amps_[x] = a; }
  const std::vector<std::complex<double>>& amps() const { return amps_; }
  std::vector<std::complex<double>>& amps() { return amps_; }

  double probability(std::uint64_t x) const { return std::norm(amps_[x]); }
  double norm_squared() const;

  /// Rescale to unit norm; throws DegenerateMarginalError on the zero vector.
  void renormalize();

 private:
  StateVector(std::size_t n, std::vector<std::complex<double>> amps);

  std::size_t n_;
  std::vector<std::complex<double>> amps_;
};

/// Probabilities of one qubit reading 0 / 1.
struct QubitMarginal {
  double p0 = 0.0;
  double p1 = 0.0;
};

/// Per-qubit marginals rounded to a fixed number of decimals.
struct QubitMarginals {
  int precision = 3;
  std::vector<QubitMarginal> per_qubit;

  std::size_t n() const { return per_qubit.size(); }
};

/// Result of one (I + U)/2-style projection step.
struct PowerStepResult {
  StateVector state;                    ///< renormalized post-step state
  double ancilla_zero_probability;      ///< norm of the kept branch before renormalizing
};

/// One power-method step: amplitudes are scaled by (1 + e^{i lambda_x}) / 2
/// and the state renormalized.  The discarded norm is what an ancilla-based
/// single-shot implementation would lose to the "1" outcome.
/// The relative amplitude damping of state x per step is cos(lambda_x / 2).
PowerStepResult apply_power_step(StateVector state, const PhaseTable& table);

/// Closed form for k power steps applied to the uniform state, bypassing the
/// iteration: |a_x| ∝ cos(lambda_x/2)^k with phase k*lambda_x/2.  Stable for
/// large k (hundreds); used as ground truth for the iterated version.
StateVector exact_power_reference(const PhaseTable& table, std::uint64_t k);

/// |1 + e^{i lambda}| = 2 cos(lambda / 2), the unnormalized per-step gain.
double eigenvalue_magnitude(double lambda);

/// Per-step amplitude ratio R = cos(lambda_s/2) / cos(lambda_d/2) of the
/// runner-up state (phase lambda_s) against the dominant state (the smallest
/// phase, lambda_d <= lambda_s).  R is in [0, 1]; R = 1 means no separation.
double convergence_ratio(double lambda_s, double lambda_d);

/// Smallest k with R^(2k) <= eps: iterations after which the competing
/// state's probability relative to the dominant one has decayed below eps.
std::uint64_t iteration_bound(double ratio, double eps);

/// Exact per-qubit marginals of a (not necessarily normalized) state,
/// normalized so p0 + p1 = 1.
std::vector<QubitMarginal> raw_marginals(const StateVector& state);

/// Marginals rounded half-to-even to `precision` decimals.  This models a
/// finite-sample probability estimate: digits beyond the precision are
/// treated as unresolvable.
QubitMarginals qubit_marginals(const StateVector& state, int precision);

/// Round half-to-even to `decimals` decimal places (2.5 -> 2, 3.5 -> 4 at 0
/// decimals).
double round_to(double value, int decimals);

/// Project qubit q onto `value` and renormalize.
/// Throws InvalidCollapseError when that outcome has zero probability.
StateVector collapse_qubit(StateVector state, std::size_t q, int value);

/// Product state with qubit q in amplitude (sqrt(p0), sqrt(p1)) from the
/// rounded marginals, except locked qubits, which are placed exactly on their
/// pinned value.  Phases are discarded: amplitudes are real and non-negative.
/// Throws DegenerateMarginalError if a free qubit has p0 = p1 = 0.
StateVector product_state_from_marginals(const QubitMarginals& marginals,
                                         const LockRegister& locks);

/// Probability that one power step's ancilla reads 0 on this state:
/// sum_x |a_x|^2 cos^2(lambda_x / 2).
double ancilla_zero_probability(const StateVector& state, const PhaseTable& table);

/// Probability of measuring exactly `target`.
double success_probability(const StateVector& state, const Bitstring& target);

/// One line per amplitude: "index real imag" (shortest round-trip floats).
void dump_state(std::ostream& out, const StateVector& state);

}  // namespace vqpm
