#include "vqpm/phase_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "vqpm/errors.hpp"
#include "vqpm/io_util.hpp"

namespace vqpm {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_qubit_count(std::size_t n) {
  if (n == 0) throw std::invalid_argument("state: need at least one qubit");
  if (n > kMaxQubits)
    throw ResourceLimitError("state: n = " + std::to_string(n) + " exceeds cap of " +
                             std::to_string(kMaxQubits));
}

}  // namespace

PhaseTable::PhaseTable(std::size_t n, std::vector<double> phases)
    : n_(n), phases_(std::move(phases)) {
  check_qubit_count(n);
  if (phases_.size() != dim())
    throw std::invalid_argument("PhaseTable: expected 2^n phases");
  for (double& p : phases_) {
    if (!(p >= -1e-9 && p <= kHalfPi + 1e-9))
      throw std::invalid_argument("PhaseTable: phase outside [0, pi/2]");
    p = std::clamp(p, 0.0, kHalfPi);
  }
}

PhaseTable build_phase_table(const QuboInstance& q, std::size_t max_n) {
  check_qubit_count(q.n());
  std::vector<double> energies = enumerate_energies(q, max_n);
  EnergyBounds bounds = energy_bounds(q);
  const double span = bounds.upper - bounds.lower;
  if (span > 0.0) {
    for (double& e : energies)
      e = std::clamp((e - bounds.lower) / span, 0.0, 1.0) * kHalfPi;
  } else {
    std::fill(energies.begin(), energies.end(), 0.0);
  }
  return PhaseTable(q.n(), std::move(energies));
}

StateVector::StateVector(std::size_t n, std::vector<std::complex<double>> amps)
    : n_(n), amps_(std::move(amps)) {}

StateVector StateVector::uniform(std::size_t n) {
  check_qubit_count(n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  const double a = 1.0 / std::sqrt(static_cast<double>(dim));
  return StateVector(n, std::vector<std::complex<double>>(dim, {a, 0.0}));
}

StateVector StateVector::basis(std::size_t n, std::uint64_t index) {
  check_qubit_count(n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (index >= dim) throw std::invalid_argument("StateVector::basis: index out of range");
  std::vector<std::complex<double>> amps(dim, {0.0, 0.0});
  amps[index] = {1.0, 0.0};
  return StateVector(n, std::move(amps));
}

StateVector StateVector::from_amplitudes(std::size_t n, std::vector<std::complex<double>> amps) {
  check_qubit_count(n);
  if (amps.size() != (std::uint64_t{1} << n))
    throw std::invalid_argument("StateVector::from_amplitudes: expected 2^n amplitudes");
  return StateVector(n, std::move(amps));
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

void StateVector::renormalize() {
  const double n2 = norm_squared();
  if (n2 <= 0.0)
    throw DegenerateMarginalError("renormalize: state has zero norm");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& a : amps_) a *= inv;
}

PowerStepResult apply_power_step(StateVector state, const PhaseTable& table) {
  if (state.n() != table.n())
    throw std::invalid_argument("apply_power_step: state/table size mismatch");
  const double before = state.norm_squared();
  auto& amps = state.amps();
  double kept = 0.0;
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    const double half = table.phase(x) * 0.5;
    // (1 + e^{i lambda}) / 2 = cos(lambda/2) e^{i lambda/2}
    const double mag = std::cos(half);
    amps[x] *= std::complex<double>(mag * std::cos(half), mag * std::sin(half));
    kept += std::norm(amps[x]);
  }
  PowerStepResult r{std::move(state), kept / before};
  r.state.renormalize();
  return r;
}

StateVector exact_power_reference(const PhaseTable& table, std::uint64_t k) {
  const auto& phases = table.phases();
  const double min_phase = *std::min_element(phases.begin(), phases.end());
  const double log_ref = std::log(std::cos(min_phase * 0.5));
  std::vector<std::complex<double>> amps(phases.size());
  for (std::uint64_t x = 0; x < phases.size(); ++x) {
    const double half = phases[x] * 0.5;
    // Magnitudes relative to the slowest-decaying state keep exponents small
    // even for hundreds of steps.
    const double mag = std::exp(static_cast<double>(k) * (std::log(std::cos(half)) - log_ref));
    amps[x] = std::polar(mag, static_cast<double>(k) * half);
  }
  StateVector state = StateVector::from_amplitudes(table.n(), std::move(amps));
  state.renormalize();
  return state;
}

double eigenvalue_magnitude(double lambda) {
  return 2.0 * std::cos(lambda * 0.5);
}

double convergence_ratio(double lambda_s, double lambda_d) {
  if (!(lambda_d <= lambda_s))
    throw std::invalid_argument("convergence_ratio: need lambda_d <= lambda_s");
  return std::cos(lambda_s * 0.5) / std::cos(lambda_d * 0.5);
}

std::uint64_t iteration_bound(double ratio, double eps) {
  if (!(ratio >= 0.0 && ratio < 1.0))
    throw std::invalid_argument("iteration_bound: ratio must be in [0, 1)");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("iteration_bound: eps must be in (0, 1)");
  if (ratio == 0.0) return 1;
  const double k = std::log(1.0 / eps) / std::log(1.0 / (ratio * ratio));
  return static_cast<std::uint64_t>(std::ceil(k));
}

std::vector<QubitMarginal> raw_marginals(const StateVector& state) {
  const std::size_t n = state.n();
  std::vector<double> one_mass(n, 0.0);
  double total = 0.0;
  const auto& amps = state.amps();
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    const double p = std::norm(amps[x]);
    total += p;
    std::uint64_t bits = x;
    while (bits) {
      one_mass[std::countr_zero(bits)] += p;
      bits &= bits - 1;
    }
  }
  if (total <= 0.0)
    throw DegenerateMarginalError("raw_marginals: state has zero norm");
  std::vector<QubitMarginal> out(n);
  for (std::size_t q = 0; q < n; ++q) {
    out[q].p1 = one_mass[q] / total;
    out[q].p0 = 1.0 - out[q].p1;
  }
  return out;
}

double round_to(double value, int decimals) {
  if (decimals < 0 || decimals > 15)
    throw std::invalid_argument("round_to: decimals must be in 0..15");
  const double scale = std::pow(10.0, decimals);
  // nearbyint under the default rounding mode resolves halves to even.
  return std::nearbyint(value * scale) / scale;
}

QubitMarginals qubit_marginals(const StateVector& state, int precision) {
  QubitMarginals m;
  m.precision = precision;
  m.per_qubit = raw_marginals(state);
  for (auto& q : m.per_qubit) {
    q.p0 = round_to(q.p0, precision);
    q.p1 = round_to(q.p1, precision);
  }
  return m;
}

StateVector collapse_qubit(StateVector state, std::size_t q, int value) {
  if (q >= state.n())
    throw std::invalid_argument("collapse_qubit: qubit index out of range");
  if (value != 0 && value != 1)
    throw std::invalid_argument("collapse_qubit: value must be 0 or 1");
  auto& amps = state.amps();
  const std::uint64_t mask = std::uint64_t{1} << q;
  double kept = 0.0;
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    if ((((x & mask) != 0) ? 1 : 0) == value) {
      kept += std::norm(amps[x]);
    } else {
      amps[x] = 0.0;
    }
  }
  if (kept <= 0.0)
    throw InvalidCollapseError("collapse_qubit: outcome " + std::to_string(value) +
                               " on qubit " + std::to_string(q) + " has zero probability");
  state.renormalize();
  return state;
}

StateVector product_state_from_marginals(const QubitMarginals& marginals,
                                         const LockRegister& locks) {
  const std::size_t n = marginals.n();
  if (locks.n() != n)
    throw std::invalid_argument("product_state_from_marginals: lock register size mismatch");
  check_qubit_count(n);

  std::vector<std::complex<double>> amps(std::uint64_t{1} << n, {0.0, 0.0});
  amps[0] = 1.0;
  std::uint64_t filled = 1;
  for (std::size_t q = 0; q < n; ++q) {
    double a0, a1;
    if (locks.is_locked(q)) {
      a0 = locks.locked_bit(q) == 0 ? 1.0 : 0.0;
      a1 = 1.0 - a0;
    } else {
      const QubitMarginal& m = marginals.per_qubit[q];
      if (m.p0 <= 0.0 && m.p1 <= 0.0)
        throw DegenerateMarginalError("product_state_from_marginals: qubit " +
                                      std::to_string(q) + " has both rounded marginals zero");
      a0 = std::sqrt(std::max(m.p0, 0.0));
      a1 = std::sqrt(std::max(m.p1, 0.0));
    }
    // Grow by one qubit: amplitudes with bit q set live one block above.
    for (std::uint64_t y = filled; y-- > 0;) {
      const std::complex<double> base = amps[y];
      amps[y + filled] = base * a1;
      amps[y] = base * a0;
    }
    filled <<= 1;
  }
  StateVector state = StateVector::from_amplitudes(n, std::move(amps));
  state.renormalize();
  return state;
}

double ancilla_zero_probability(const StateVector& state, const PhaseTable& table) {
  if (state.n() != table.n())
    throw std::invalid_argument("ancilla_zero_probability: state/table size mismatch");
  double acc = 0.0;
  double total = 0.0;
  const auto& amps = state.amps();
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    const double p = std::norm(amps[x]);
    const double c = std::cos(table.phase(x) * 0.5);
    acc += p * c * c;
    total += p;
  }
  if (total <= 0.0)
    throw DegenerateMarginalError("ancilla_zero_probability: state has zero norm");
  return acc / total;
}

double success_probability(const StateVector& state, const Bitstring& target) {
  if (target.size() != state.n())
    throw std::invalid_argument("success_probability: target size mismatch");
  const double total = state.norm_squared();
  if (total <= 0.0)
    throw DegenerateMarginalError("success_probability: state has zero norm");
  return state.probability(target.index()) / total;
}

void dump_state(std::ostream& out, const StateVector& state) {
  for (std::uint64_t x = 0; x < state.dim(); ++x) {
    const std::complex<double> a = state.amp(x);
    out << x << " " << format_double(a.real()) << " " << format_double(a.imag()) << "\n";
  }
}

}  // namespace vqpm
