#pragma once

#include <functional>
#include <vector>

#include "qlrt/rng.hpp"

namespace qlrt {

// One component's observation schedule: strictly increasing times from 0 to
// the horizon. Interval i (0-based) is (times[i], times[i+1]].
struct ObservationGrid {
  std::vector<double> times;
  int component = 1;

  int interval_count() const { return static_cast<int>(times.size()) - 1; }
  double horizon() const { return times.back(); }
  double interval_length(int i) const { return times[i + 1] - times[i]; }

  void validate() const;  // throws ConfigError on malformed times
};

// Poisson arrivals on (0, horizon) with 0 and the horizon appended, so the
// grid always spans [0, horizon]. No arrivals yields the single interval
// [0, horizon].
ObservationGrid gen_poisson_grid(double rate, double horizon, Rng& rng,
                                 int component = 1);

// Sparse interval-intersection structure between two grids. Only pairs with
// strictly positive intersection length appear; entries are sorted by (i, j)
// and, per i, the j values are contiguous.
struct OverlapEntry {
  int i = 0;  // interval index into grid 1
  int j = 0;  // interval index into grid 2
  double length = 0.0;
};

struct OverlapStructure {
  std::vector<OverlapEntry> entries;
  std::vector<double> g;  // length / sqrt(|I_i| |I_j|), parallel to entries
};

OverlapStructure build_overlaps(const ObservationGrid& grid1,
                                const ObservationGrid& grid2);

// Same sweep with an arbitrary interval measure; `measure(a, b)` must return
// the measure of (a, b]. Used by the likelihood to weight lengths by the
// time-dependence of the diffusion.
std::vector<OverlapEntry> sweep_overlaps(
    const ObservationGrid& grid1, const ObservationGrid& grid2,
    const std::function<double(double, double)>& measure);

}  // namespace qlrt
