#include "qlrt/grid.hpp"

#include <cmath>

#include "qlrt/errors.hpp"

namespace qlrt {

void ObservationGrid::validate() const {
  if (times.size() < 2) throw ConfigError("grid needs at least two times");
  if (times.front() != 0.0) throw ConfigError("grid must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ConfigError("grid times must be strictly increasing");
    }
  }
}

ObservationGrid gen_poisson_grid(double rate, double horizon, Rng& rng,
                                 int component) {
  if (!(rate > 0.0)) throw ConfigError("poisson rate must be positive");
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  ObservationGrid g;
  g.component = component;
  g.times.push_back(0.0);
  double t = rng.exponential(rate);
  while (t < horizon) {
    g.times.push_back(t);
    t += rng.exponential(rate);
  }
  g.times.push_back(horizon);
  return g;
}

std::vector<OverlapEntry> sweep_overlaps(
    const ObservationGrid& grid1, const ObservationGrid& grid2,
    const std::function<double(double, double)>& measure) {
  if (grid1.horizon() != grid2.horizon()) {
    throw ConfigError("grids span different horizons");
  }
  const int m1 = grid1.interval_count();
  const int m2 = grid2.interval_count();
  std::vector<OverlapEntry> out;
  out.reserve(static_cast<std::size_t>(m1 + m2));
  int i = 0, j = 0;
  while (i < m1 && j < m2) {
    const double end1 = grid1.times[i + 1];
    const double end2 = grid2.times[j + 1];
    const double lo = std::max(grid1.times[i], grid2.times[j]);
    const double hi = std::min(end1, end2);
    if (hi > lo) out.push_back({i, j, measure(lo, hi)});
    // Advance whichever interval ends first; on a tie both end here.
    if (end1 <= end2) ++i;
    if (end2 <= end1) ++j;
  }
  return out;
}

OverlapStructure build_overlaps(const ObservationGrid& grid1,
                                const ObservationGrid& grid2) {
  OverlapStructure s;
  s.entries =
      sweep_overlaps(grid1, grid2, [](double a, double b) { return b - a; });
  s.g.reserve(s.entries.size());
  for (const auto& e : s.entries) {
    s.g.push_back(e.length / std::sqrt(grid1.interval_length(e.i) *
                                       grid2.interval_length(e.j)));
  }
  return s;
}

}  // namespace qlrt
