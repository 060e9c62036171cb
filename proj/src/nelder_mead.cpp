#include "vqpm/nelder_mead.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace vqpm {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             const std::vector<double>& start, double step,
                             const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  if (dim == 0) throw std::invalid_argument("nelder_mead: empty start point");
  if (options.max_evals < 1) throw std::invalid_argument("nelder_mead: max_evals must be >= 1");

  NelderMeadResult result;
  result.best_point = start;
  bool budget_left = true;
  auto eval = [&](const std::vector<double>& x) {
    // On a spent budget, report +inf so the caller-visible best never moves.
    if (result.evals_used >= options.max_evals) {
      budget_left = false;
      return std::numeric_limits<double>::infinity();
    }
    ++result.evals_used;
    const double v = objective(x);
    if (result.evals_used == 1 || v < result.best_value) {
      result.best_value = v;
      result.best_point = x;
    }
    return v;
  };

  // Initial simplex: the start point plus one vertex offset along each axis.
  std::vector<std::vector<double>> simplex(dim + 1, start);
  std::vector<double> values(dim + 1);
  values[0] = eval(simplex[0]);
  for (std::size_t i = 0; i < dim; ++i) {
    simplex[i + 1][i] += step;
    values[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), candidate(dim);
  while (budget_left) {
    for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order[0], second_worst = order[dim - 1], worst = order[dim];
    if (values[worst] - values[best] < options.tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[order[i]][d];
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto blend = [&](double t) {
      for (std::size_t d = 0; d < dim; ++d)
        candidate[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
    };

    blend(-1.0);  // reflection
    const double reflected = eval(candidate);
    if (reflected < values[best]) {
      std::vector<double> reflected_point = candidate;
      blend(-2.0);  // expansion
      const double expanded = eval(candidate);
      if (expanded < reflected) {
        simplex[worst] = candidate;
        values[worst] = expanded;
      } else {
        simplex[worst] = std::move(reflected_point);
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = candidate;
      values[worst] = reflected;
      continue;
    }
    if (reflected < values[worst]) {
      blend(-0.5);  // outside contraction
      const double contracted = eval(candidate);
      if (contracted <= reflected) {
        simplex[worst] = candidate;
        values[worst] = contracted;
        continue;
      }
    } else {
      blend(0.5);  // inside contraction
      const double contracted = eval(candidate);
      if (contracted < values[worst]) {
        simplex[worst] = candidate;
        values[worst] = contracted;
        continue;
      }
    }
    // Shrink everything toward the best vertex.
    for (std::size_t i = 1; i <= dim; ++i) {
      const std::size_t v = order[i];
      for (std::size_t d = 0; d < dim; ++d)
        simplex[v][d] = simplex[best][d] + 0.5 * (simplex[v][d] - simplex[best][d]);
      values[v] = eval(simplex[v]);
    }
  }
  return result;
}

}  // namespace vqpm
