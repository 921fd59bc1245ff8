#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace qlrt {

// Regularized upper incomplete gamma Q(a, x), absolute error below 1e-12
// for the chi-square arguments used here.
double gamma_q(double a, double x);

// Upper-tail probability P(X >= x) for X ~ chi-square with r degrees of
// freedom. chi2_sf(x, 2) == exp(-x/2) exactly up to rounding.
double chi2_sf(double x, int r);

// 1-alpha quantile: the x with chi2_sf(x, r) == alpha to within 1e-10.
double chi2_quantile(double alpha, int r);

// Standard normal CDF, survival function, and quantile (absolute error
// below 1e-9 after Newton refinement).
double normal_cdf(double x);
double normal_sf(double x);
double normal_quantile(double p);

// Kolmogorov-Smirnov statistic D = sup |F_emp - F| against an arbitrary
// continuous reference CDF, and the asymptotic p-value P(sqrt(n) D > d).
// The sample need not be sorted.
std::pair<double, double> ks_statistic(const std::vector<double>& samples,
                                       const std::function<double(double)>& cdf);

// Convenience: KS against the chi-square CDF with r degrees of freedom.
std::pair<double, double> ks_vs_chi2(const std::vector<double>& samples, int r);

// Survival function of the Kolmogorov distribution, series truncated at
// 100 terms (absolute tolerance well below 1e-10).
double kolmogorov_sf(double z);

}  // namespace qlrt
