#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qlrt/grid.hpp"
#include "qlrt/model.hpp"
#include "qlrt/rng.hpp"

namespace qlrt {

// Nonsynchronous observations of the two components: the grids, the sampled
// path values at the grid times, and the per-interval increments.
struct NonsyncData {
  ObservationGrid grid1, grid2;
  std::vector<double> values1, values2;      // same lengths as the grids
  std::vector<double> increments1, increments2;

  void rebuild_increments();
  void validate() const;
};

// Euler-Maruyama on the union of a uniform fine partition and both grids'
// observation times, started at (0, 0); observation times are hit exactly.
// Throws NumericError when Sigma(sigma) is not positive definite (built-in
// families).
NonsyncData simulate_and_sample(const ModelSpec& model,
                                const std::vector<double>& sigma,
                                const std::vector<double>& theta,
                                const ObservationGrid& grid1,
                                const ObservationGrid& grid2, double fine_step,
                                Rng& rng);

// Observation CSV: header `component,time,value`, one row per observation,
// component-1 rows before component-2 rows, 17 significant digits.
void write_observations_csv(std::ostream& os, const NonsyncData& data);
NonsyncData read_observations_csv(std::istream& is);
void write_observations_file(const std::string& path, const NonsyncData& data);
NonsyncData read_observations_file(const std::string& path);

}  // namespace qlrt
