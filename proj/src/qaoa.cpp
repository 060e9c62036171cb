#include "vqpm/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "vqpm/nelder_mead.hpp"
#include "vqpm/rng.hpp"

namespace vqpm {

StateVector qaoa_state(const PhaseTable& table, const QaoaParams& params) {
  if (params.gammas.size() != params.betas.size())
    throw std::invalid_argument("qaoa_state: gammas and betas must have the same length");

  StateVector state = StateVector::uniform(table.n());
  auto& amps = state.amps();
  for (std::size_t l = 0; l < params.layers(); ++l) {
    const double gamma = params.gammas[l];
    for (std::uint64_t x = 0; x < amps.size(); ++x)
      amps[x] *= std::polar(1.0, -gamma * table.phase(x));

    // e^{-i beta X} on every qubit.
    const double c = std::cos(params.betas[l]);
    const std::complex<double> ms(0.0, -std::sin(params.betas[l]));
    for (std::size_t q = 0; q < table.n(); ++q) {
      const std::uint64_t mask = std::uint64_t{1} << q;
      for (std::uint64_t x = 0; x < amps.size(); ++x) {
        if (x & mask) continue;
        const std::complex<double> a0 = amps[x];
        const std::complex<double> a1 = amps[x | mask];
        amps[x] = c * a0 + ms * a1;
        amps[x | mask] = ms * a0 + c * a1;
      }
    }
  }
  return state;
}

double expected_phase(const StateVector& state, const PhaseTable& table) {
  if (state.n() != table.n())
    throw std::invalid_argument("expected_phase: state/table size mismatch");
  double acc = 0.0;
  double total = 0.0;
  const auto& amps = state.amps();
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    const double p = std::norm(amps[x]);
    acc += p * table.phase(x);
    total += p;
  }
  return acc / total;
}

QaoaOptimum optimize_qaoa(const PhaseTable& table, std::size_t p, const OptimizerConfig& opt,
                          const std::vector<Bitstring>& targets) {
  if (p < 1) throw std::invalid_argument("optimize_qaoa: need at least one layer");
  if (opt.max_evals < 1) throw std::invalid_argument("optimize_qaoa: max_evals must be >= 1");
  for (const Bitstring& t : targets)
    if (t.size() != table.n())
      throw std::invalid_argument("optimize_qaoa: target size does not match table");

  // Flat parameter vector: [gamma_1..gamma_p, beta_1..beta_p].
  auto unpack = [p](const std::vector<double>& x) {
    QaoaParams params;
    params.gammas.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p));
    params.betas.assign(x.begin() + static_cast<std::ptrdiff_t>(p), x.end());
    return params;
  };
  auto objective = [&](const std::vector<double>& x) {
    return expected_phase(qaoa_state(table, unpack(x)), table);
  };

  const int restarts = std::max(1, opt.restarts);
  const int per_restart = std::max(1, opt.max_evals / restarts);
  std::mt19937_64 gen(opt.seed);

  QaoaOptimum best;
  bool have_best = false;
  while (best.evals_used < opt.max_evals) {
    std::vector<double> start(2 * p);
    for (std::size_t i = 0; i < p; ++i) start[i] = uniform01(gen) * std::numbers::pi;
    for (std::size_t i = p; i < 2 * p; ++i) start[i] = uniform01(gen) * std::numbers::pi / 2.0;

    NelderMeadOptions nm;
    nm.max_evals = std::min(per_restart, opt.max_evals - best.evals_used);
    NelderMeadResult r = nelder_mead(objective, start, 0.25, nm);
    best.evals_used += r.evals_used;
    if (!have_best || r.best_value < best.expected_phase) {
      best.expected_phase = r.best_value;
      best.params = unpack(r.best_point);
      have_best = true;
    }
  }

  const StateVector final_state = qaoa_state(table, best.params);
  const double total = final_state.norm_squared();
  double mass = 0.0;
  for (const Bitstring& t : targets) mass += final_state.probability(t.index());
  best.target_probability = mass / total;
  return best;
}

}  // namespace vqpm
