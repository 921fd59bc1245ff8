#pragma once

#include "qlrt/grid.hpp"
#include "qlrt/lrt.hpp"
#include "qlrt/simulate.hpp"

namespace qlrt {

// Covariation estimate with its asymptotic-variance decomposition and the
// standardized statistic.
struct HYResult {
  double hy = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0;
  double u_n = 0.0;   // lambda1 + lambda2 + lambda3
  double v_n = 0.0;   // sqrt(n) hy / sqrt(u_n), signed
  int n_obs = 0;      // the n used in the sqrt(n) scaling (configured, not
                      // derived from the grids)
};

// Sum of increment products over overlapping interval pairs. Touching
// endpoints have empty half-open intersection and are excluded by the sparse
// structure.
double hy_estimator(const NonsyncData& data, const OverlapStructure& overlaps);

// Variance estimator for the constant-diffusion case. Throws NumericError
// when the estimate is not strictly positive.
HYResult u_n_variance(const NonsyncData& data, const OverlapStructure& overlaps,
                      int n, double horizon);

// Two-sided zero-covariation test. The reported statistic is v_n squared so
// that the chi-square(1) threshold matches |v_n| >= z(1 - alpha/2) exactly.
TestOutcome v_n_test(const NonsyncData& data, const OverlapStructure& overlaps,
                     int n, double horizon, double alpha);

}  // namespace qlrt
