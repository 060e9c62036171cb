#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vqpm/bits.hpp"

namespace vqpm {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Quadratic unconstrained binary optimization instance over n variables,
///
///   E(x) = sum_i q_ii x_i + sum_{i<j} q_ij x_i x_j,   x in {0,1}^n,
///
/// stored as the packed upper triangle of the coefficient matrix.
class QuboInstance {
 public:
  /// All coefficients zero.
  explicit QuboInstance(std::size_t n);

  std::size_t n() const { return n_; }

  /// Coefficient q_ij for i <= j (diagonal = linear terms).
  /// Throws std::invalid_argument on i > j or j >= n.
  double coeff(std::size_t i, std::size_t j) const;

  /// Set q_ij for i <= j.  The value must be finite.
  void set_coeff(std::size_t i, std::size_t j, double value);

  /// Packed upper triangle, row-major: (0,0), (0,1), ..., (0,n-1), (1,1), ...
  const std::vector<double>& coeffs() const { return coeffs_; }

  friend bool operator==(const QuboInstance& a, const QuboInstance& b) = default;

 private:
  std::size_t offset(std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  std::vector<double> coeffs_;
};

struct EnergyBounds {
  double lower = 0.0;  ///< not above the true minimum
  double upper = 0.0;  ///< not below the true maximum
};

/// Per-variable influence scores in [0, 1]; see influence_scores().
struct InfluenceScores {
  std::vector<double> scores;
};

/// Result of exhaustive minimization.
struct OracleResult {
  double min_energy = 0.0;
  std::vector<Bitstring> argmin;         ///< all minimizers, ascending by index
  std::vector<double> sorted_spectrum;   ///< all 2^n energies, ascending
  double eigengap = 0.0;                 ///< sorted_spectrum[1] - sorted_spectrum[0]; 0 when the minimum repeats

  bool degenerate() const { return argmin.size() > 1; }
};

/// Instance with every coefficient drawn uniformly from coeff_range,
/// deterministically from the seed.
QuboInstance generate_random(std::size_t n, std::uint64_t seed, Interval coeff_range);

/// E(x) for one assignment.  Throws std::invalid_argument on size mismatch.
double energy(const QuboInstance& q, const Bitstring& x);

/// Cheap bounds on the energy range: sums of negative / positive
/// coefficients.  Always contain the true spectrum, not necessarily tight.
EnergyBounds energy_bounds(const QuboInstance& q);

/// Influence(i) = (sum_j |Q_ij|) / max_i sum_j |Q_ij| over the symmetrized
/// coefficient matrix.  The most coupled variable scores exactly 1; an
/// all-zero instance carries no signal, so every variable scores 1.
InfluenceScores influence_scores(const QuboInstance& q);

/// All 2^n energies in state-index order, computed incrementally with a
/// Gray-code walk (one coefficient row per step).
/// Throws ResourceLimitError if n exceeds max_n.
std::vector<double> enumerate_energies(const QuboInstance& q, std::size_t max_n = 26);

/// Exhaustive minimization; intended as ground truth for small n.
/// Throws ResourceLimitError if n exceeds max_n.
OracleResult brute_force_solve(const QuboInstance& q, std::size_t max_n = 20);

/// Text format: first non-comment line holds n, every following line holds
/// "i j q_ij" with 0 <= i <= j < n.  '#' starts a comment, blank lines are
/// skipped, entries may repeat (last one wins).
/// Throws std::runtime_error with a line number on malformed input.
QuboInstance read_instance(std::istream& in);
QuboInstance load_instance(const std::string& path);
void write_instance(std::ostream& out, const QuboInstance& q);

}  // namespace vqpm
