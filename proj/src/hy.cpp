#include "qlrt/hy.hpp"

#include <cmath>

#include "qlrt/errors.hpp"
#include "qlrt/stats.hpp"

namespace qlrt {

double hy_estimator(const NonsyncData& data, const OverlapStructure& overlaps) {
  double sum = 0.0;
  for (const auto& e : overlaps.entries) {
    sum += data.increments1[static_cast<std::size_t>(e.i)] *
           data.increments2[static_cast<std::size_t>(e.j)];
  }
  return sum;
}

HYResult u_n_variance(const NonsyncData& data, const OverlapStructure& overlaps,
                      int n, double horizon) {
  HYResult r;
  r.n_obs = n;
  r.hy = hy_estimator(data, overlaps);
  const double nd = static_cast<double>(n);
  const double scale = nd * r.hy * r.hy / (horizon * horizon);

  double len_sq = 0.0;
  for (int i = 0; i < data.grid1.interval_count(); ++i) {
    const double l = data.grid1.interval_length(i);
    len_sq += l * l;
  }
  for (int j = 0; j < data.grid2.interval_count(); ++j) {
    const double l = data.grid2.interval_length(j);
    len_sq += l * l;
  }
  r.lambda1 = scale * len_sq;

  double inter_sq = 0.0;
  double prod_sq = 0.0;
  for (const auto& e : overlaps.entries) {
    inter_sq += e.length * e.length;
    const double d1 = data.increments1[static_cast<std::size_t>(e.i)];
    const double d2 = data.increments2[static_cast<std::size_t>(e.j)];
    prod_sq += d1 * d1 * d2 * d2;
  }
  r.lambda2 = -scale * inter_sq;
  r.lambda3 = nd * prod_sq + 2.0 * r.lambda2;
  r.u_n = r.lambda1 + r.lambda2 + r.lambda3;
  // Degenerate also when the components cancel to rounding noise.
  const double magnitude = std::fabs(r.lambda1) + std::fabs(r.lambda2) +
                           std::fabs(r.lambda3);
  if (!(r.u_n > 1e-12 * magnitude)) {
    throw NumericError("degenerate variance estimate in the covariation test");
  }
  r.v_n = std::sqrt(nd) * r.hy / std::sqrt(r.u_n);
  return r;
}

TestOutcome v_n_test(const NonsyncData& data, const OverlapStructure& overlaps,
                     int n, double horizon, double alpha) {
  const HYResult r = u_n_variance(data, overlaps, n, horizon);
  TestOutcome out;
  out.test = "hy";
  out.statistic = r.v_n * r.v_n;
  out.df = 1;
  out.alpha = alpha;
  out.p_value = 2.0 * normal_sf(std::fabs(r.v_n));
  out.reject = out.p_value <= alpha;
  return out;
}

}  // namespace qlrt
