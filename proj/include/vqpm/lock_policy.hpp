#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vqpm/lock_register.hpp"
#include "vqpm/phase_sim.hpp"
#include "vqpm/qubo.hpp"

namespace vqpm {

class ThresholdPolicy;

/// Same threshold for every qubit and iteration.  A value above 1 can never
/// be met by a probability difference, which turns locking off entirely.
struct FixedThreshold {
  double p = 0.01;
};

/// Threshold p0 / f(k) shrinking with the iteration count, floored so late
/// iterations still lock.  f(k) = 2^k by default; Linear uses f(k) = k.
struct GeometricDecay {
  enum class Law { Pow2, Linear };
  double p0 = 0.16;
  Law law = Law::Pow2;
  double floor = 0.01;
};

/// Confidence-interval threshold: failure budget delta_total is split evenly
/// over the run's iterations and each slice is turned into a two-sided
/// deviation bound for 10*n*M effective samples.  The raw value is clamped
/// into `clamp` so very small or large n stay in a sane operating range.
struct HoeffdingThreshold {
  double delta_total = 0.5;
  int shots = 100;     ///< M, measurements per qubit per iteration
  int max_iter = 30;   ///< horizon the failure budget is spread over
  Interval clamp{0.005, 0.015};
};

/// Wraps a base policy, dividing its threshold by each qubit's influence
/// score: strongly coupled qubits (score near 1) keep the base threshold and
/// lock on the usual signal, weakly coupled ones need a larger probability
/// gap.  The result is clamped to the base policy's clamp when it has one.
struct InfluenceWeighted {
  std::shared_ptr<const ThresholdPolicy> base;
  InfluenceScores scores;
};

/// Wraps a base policy, multiplying its threshold by a fixed per-qubit
/// profile (default 2^q).  Kept for experimentation; off unless asked for.
struct BitSignificance {
  std::shared_ptr<const ThresholdPolicy> base;
  std::vector<double> profile;
};

/// Tagged union over the locking-threshold strategies.  Immutable once
/// built; constructors validate their parameters.
class ThresholdPolicy {
 public:
  using Variant =
      std::variant<FixedThreshold, GeometricDecay, HoeffdingThreshold,
                   InfluenceWeighted, BitSignificance>;

  ThresholdPolicy(FixedThreshold f);          // NOLINT: implicit by design
  ThresholdPolicy(GeometricDecay d);          // NOLINT
  ThresholdPolicy(HoeffdingThreshold h);      // NOLINT
  ThresholdPolicy(InfluenceWeighted w);       // NOLINT
  ThresholdPolicy(BitSignificance b);         // NOLINT

  const Variant& variant() const { return v_; }

 private:
  Variant v_;
};

/// Two-sided Hoeffding deviation bound for a per-iteration failure budget
/// delta_i and 10*n*M effective samples:
///   epsilon = sqrt( ln(2 / delta_i) / (2 * 10 * n * M) ).
/// Throws std::invalid_argument unless 0 < delta_i < 2 and n, M >= 1.
double hoeffding_epsilon(double delta_i, std::size_t n, int shots);

/// Even split of a total failure budget over `remaining` iterations.
/// Throws std::invalid_argument when remaining < 1.
double delta_schedule(double delta_total, int remaining);

/// Default per-qubit multiplier profile for BitSignificance: scale^q.
std::vector<double> bit_significance_profile(std::size_t n, double scale = 2.0);

/// Threshold in force for qubit q at (1-based) iteration k with n qubits.
/// Throws std::invalid_argument on k < 1 or q >= n.
double threshold_for(const ThresholdPolicy& policy, int k, std::size_t q, std::size_t n);

struct LockDecision {
  LockRegister locks;
  std::vector<LockEvent> events;
};

/// Lock every free qubit whose rounded marginal difference |p0 - p1| meets
/// its threshold, onto the likelier value.  Exact ties never lock; locked
/// qubits are never revisited.  Pure: returns the updated register plus the
/// events taken this iteration.
LockDecision decide_locks(const QubitMarginals& marginals, const ThresholdPolicy& policy,
                          LockRegister locks, int k);

/// Context a policy string may need: qubit count (per-qubit profiles),
/// iteration horizon (Hoeffding budget), influence scores (influence
/// weighting; absent means influence policies are rejected).
struct PolicyContext {
  std::size_t n = 0;
  int max_iter = 30;
  std::optional<InfluenceScores> influence;
};

/// Parse a policy string:
///   fixed:0.01
///   none                      (alias for fixed:2, which never locks)
///   decay:p0=0.16,floor=0.01,law=pow2|linear
///   hoeffding:delta=0.5,M=100,clamp=0.005:0.015
///   hoeffding+influence[:delta=...,M=...,clamp=...]
///   bitsig:p=0.01,scale=2
/// Unknown names, unknown keys, or malformed values throw
/// std::invalid_argument.
ThresholdPolicy make_policy(const std::string& text, const PolicyContext& ctx);

}  // namespace vqpm
