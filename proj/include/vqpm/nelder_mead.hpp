#pragma once

#include <functional>
#include <vector>

namespace vqpm {

struct NelderMeadOptions {
  int max_evals = 500;       ///< hard budget on objective evaluations
  double tolerance = 1e-10;  ///< stop when the simplex value spread is below this
};

struct NelderMeadResult {
  std::vector<double> best_point;
  double best_value = 0.0;
  int evals_used = 0;
};

/// Downhill simplex minimization (reflection/expansion/contraction/shrink
/// with the textbook coefficients).  Deterministic for a given start point;
/// never evaluates the objective more than max_evals times and always
/// returns the best point seen.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             const std::vector<double>& start, double step,
                             const NelderMeadOptions& options = {});

}  // namespace vqpm
