#include "qlrt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlrt/errors.hpp"

namespace qlrt {

namespace {

// Regularized lower incomplete gamma by power series; converges fast for
// x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by Lentz continued fraction; used for
// x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double chi2_pdf(double x, int r) {
  if (x <= 0.0) return 0.0;
  const double a = 0.5 * r;
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) -
                  std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw NumericError("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_sf(double x, int r) {
  if (r < 1) throw NumericError("chi2_sf: df must be positive");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * r, 0.5 * x);
}

double chi2_quantile(double alpha, int r) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw NumericError("chi2_quantile: alpha must lie in (0,1)");
  }
  // Bracket the root of chi2_sf(x) - alpha, then bisect with Newton polish.
  double lo = 0.0;
  double hi = std::max(2.0 * r, 8.0);
  while (chi2_sf(hi, r) > alpha) hi *= 2.0;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = chi2_sf(x, r) - alpha;
    if (f > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double pdf = chi2_pdf(x, r);
    double next = x;
    if (pdf > 0.0) next = x + f / pdf;  // sf' = -pdf
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(f) < 1e-12 && hi - lo < 1e-10 * (1.0 + x)) return x;
    x = next;
  }
  return x;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

double normal_sf(double x) {
  return 0.5 * std::erfc(x * 0.70710678118654752440);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw NumericError("normal_quantile: p must lie in (0,1)");
  }
  // Acklam's rational approximation, then two Newton steps on the CDF.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double e = normal_cdf(x) - p;
    const double pdf =
        std::exp(-0.5 * x * x) * 0.39894228040143267794;
    if (pdf > 0.0) x -= e / pdf;
  }
  return x;
}

std::pair<double, double> ks_statistic(
    const std::vector<double>& samples,
    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw NumericError("ks_statistic: empty sample");
  std::vector<double> xs(samples);
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  const double p = kolmogorov_sf(std::sqrt(n) * d);
  return {d, p};
}

std::pair<double, double> ks_vs_chi2(const std::vector<double>& samples,
                                     int r) {
  return ks_statistic(samples,
                      [r](double x) { return 1.0 - chi2_sf(x, r); });
}

double kolmogorov_sf(double z) {
  if (z <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * z * z);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace qlrt
