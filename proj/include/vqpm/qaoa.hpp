#pragma once

#include <cstdint>
#include <vector>

#include "vqpm/bits.hpp"
#include "vqpm/phase_sim.hpp"

namespace vqpm {

/// Angles of a p-layer alternating circuit: gamma drives the cost phase,
/// beta the transverse mixer.  Both vectors share length p.
struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;

  std::size_t layers() const { return gammas.size(); }
};

struct OptimizerConfig {
  int max_evals = 2000;  ///< objective-evaluation budget across all restarts
  int restarts = 5;      ///< random re-initializations of the simplex search
  std::uint64_t seed = 0;
};

/// Build the circuit state: from uniform, each layer applies the diagonal
/// phase e^{-i gamma_l lambda_x} to every amplitude and then rotates every
/// qubit by angle 2*beta_l about the X axis.  Output is normalized.
StateVector qaoa_state(const PhaseTable& table, const QaoaParams& params);

/// Mean eigenphase sum_x |a_x|^2 lambda_x.  Because phases are a monotone
/// rescaling of instance energies, minimizing this minimizes the energy
/// expectation as well.
double expected_phase(const StateVector& state, const PhaseTable& table);

struct QaoaOptimum {
  QaoaParams params;
  double expected_phase = 0.0;      ///< best objective value found
  double target_probability = 0.0;  ///< final circuit's mass on the target set
  int evals_used = 0;
};

/// Minimize expected_phase over the 2p angles with a simplex search restarted
/// from seeded random points (gamma in [0, pi], beta in [0, pi/2]).
/// Deterministic for a given seed.  A spent budget returns the best found so
/// far; it is not an error.
QaoaOptimum optimize_qaoa(const PhaseTable& table, std::size_t p, const OptimizerConfig& opt,
                          const std::vector<Bitstring>& targets);

}  // namespace vqpm
