#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qlrt/model.hpp"

namespace qlrt {

// Box-constrained maximization problem. The objective may return -inf to
// mark infeasible points. Coordinates with a pinned value never move.
struct OptProblem {
  std::function<double(const std::vector<double>&)> objective;
  Box box;
  std::vector<std::optional<double>> pinned;  // empty = nothing pinned
  std::vector<std::vector<double>> extra_starts;  // additional refinement seeds
  int grid_points_per_coord = 9;
  int refine_starts = 3;          // Nelder-Mead runs seeded from grid ranking
  int max_evals_per_start = 2000;
  double simplex_tol = 1e-8;
};

struct OptResult {
  std::vector<double> argmax;
  double value = 0.0;
  long evaluations = 0;
};

// Coarse tensor grid scan over the free coordinates followed by Nelder-Mead
// refinement from the best grid points (and every extra start), candidates
// clipped to the box. Deterministic: ties break toward the lexicographically
// smaller point. Throws NumericError when every scanned point is -inf.
OptResult maximize(const OptProblem& problem);

}  // namespace qlrt
