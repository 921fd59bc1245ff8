#include "qlrt/model.hpp"

#include <cmath>

#include "qlrt/errors.hpp"

namespace qlrt {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Box default_box(int dim) { return Box(static_cast<std::size_t>(dim), Interval{}); }

// Triangular map shared by the constant and sine-modulated families.
Eigen::Matrix2d triangular(const std::vector<double>& sigma) {
  Eigen::Matrix2d b;
  b << sigma[0], sigma[2], 0.0, sigma[1];
  return b;
}

// weight(t) for the sine-modulated family: (1 + sin(2 pi t)/2)^2, the scalar
// multiplying Sigma (the amplitude multiplies b, so it enters Sigma squared).
double sine_weight(double t) {
  const double m = 1.0 + 0.5 * std::sin(kTwoPi * t);
  return m * m;
}

// Antiderivative of sine_weight: expand to 9/8 + sin(2 pi t) - cos(4 pi t)/8.
double sine_weight_antiderivative(double t) {
  return 9.0 * t / 8.0 - std::cos(kTwoPi * t) / kTwoPi -
         std::sin(2.0 * kTwoPi * t) / (16.0 * kTwoPi);
}

double simpson_rule(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(f, a, m, fa, flm, fm);
  const double right = simpson_rule(f, m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = simpson_rule(f, a, b, fa, fm, fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, 40);
}

int ModelSpec::sigma_dim() const {
  switch (diffusion_family) {
    case DiffusionFamily::ConstTriangular:
    case DiffusionFamily::SineModulated:
      return 3;
    case DiffusionFamily::Custom:
      return custom_sigma_dim;
  }
  return 0;
}

int ModelSpec::theta_dim() const {
  switch (drift_family) {
    case DriftFamily::None:
      return 0;
    case DriftFamily::SineAffine:
      return 2;
    case DriftFamily::Custom:
      return custom_theta_dim;
  }
  return 0;
}

ModelSpec ModelSpec::const_triangular() {
  ModelSpec m;
  m.diffusion_family = DiffusionFamily::ConstTriangular;
  m.drift_family = DriftFamily::None;
  m.sigma_box = default_box(3);
  m.sigma_test_order = {2, 0, 1};
  return m;
}

ModelSpec ModelSpec::sine_modulated() {
  ModelSpec m = const_triangular();
  m.diffusion_family = DiffusionFamily::SineModulated;
  return m;
}

ModelSpec ModelSpec::sine_drift() {
  ModelSpec m = const_triangular();
  m.drift_family = DriftFamily::SineAffine;
  m.theta_box = default_box(2);
  m.theta_test_order = {0, 1};
  return m;
}

Eigen::Vector2d eval_drift(const ModelSpec& model,
                           const std::vector<double>& theta, double t) {
  switch (model.drift_family) {
    case DriftFamily::None:
      return Eigen::Vector2d::Zero();
    case DriftFamily::SineAffine: {
      const double s = std::sin(t);
      return {(1.0 + theta[0]) * s, (-1.0 + theta[1]) * s};
    }
    case DriftFamily::Custom:
      if (!model.custom_drift) throw ConfigError("custom drift not set");
      return model.custom_drift(theta, t);
  }
  throw ConfigError("unknown drift family");
}

Eigen::Matrix2d eval_diffusion(const ModelSpec& model,
                               const std::vector<double>& sigma, double t) {
  switch (model.diffusion_family) {
    case DiffusionFamily::ConstTriangular:
      return triangular(sigma);
    case DiffusionFamily::SineModulated:
      return (1.0 + 0.5 * std::sin(kTwoPi * t)) * triangular(sigma);
    case DiffusionFamily::Custom:
      if (!model.custom_diffusion) throw ConfigError("custom diffusion not set");
      return model.custom_diffusion(sigma, t);
  }
  throw ConfigError("unknown diffusion family");
}

Eigen::Matrix2d sigma_matrix(const ModelSpec& model,
                             const std::vector<double>& sigma, double t) {
  const Eigen::Matrix2d b = eval_diffusion(model, sigma, t);
  return b * b.transpose();
}

bool diffusion_separable(const ModelSpec& model) {
  return model.diffusion_family != DiffusionFamily::Custom;
}

Eigen::Matrix2d diffusion_const_matrix(const ModelSpec& model,
                                       const std::vector<double>& sigma) {
  if (!diffusion_separable(model)) {
    throw ConfigError("diffusion is not separable");
  }
  const Eigen::Matrix2d b = triangular(sigma);
  return b * b.transpose();
}

double diffusion_weight_integral(const ModelSpec& model, double a, double b) {
  switch (model.diffusion_family) {
    case DiffusionFamily::ConstTriangular:
      return b - a;
    case DiffusionFamily::SineModulated:
      return sine_weight_antiderivative(b) - sine_weight_antiderivative(a);
    case DiffusionFamily::Custom:
      throw ConfigError("diffusion is not separable");
  }
  throw ConfigError("unknown diffusion family");
}

bool spd2x2(const Eigen::Matrix2d& m) {
  return m(0, 0) > 0.0 && m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) > 0.0;
}

Eigen::Matrix2d sigma_integral(const ModelSpec& model,
                               const std::vector<double>& sigma, double a,
                               double b) {
  if (diffusion_separable(model)) {
    return diffusion_weight_integral(model, a, b) *
           diffusion_const_matrix(model, sigma);
  }
  Eigen::Matrix2d out;
  for (int r = 0; r < 2; ++r) {
    for (int c = r; c < 2; ++c) {
      out(r, c) = adaptive_simpson(
          [&](double t) { return sigma_matrix(model, sigma, t)(r, c); }, a, b);
    }
  }
  out(1, 0) = out(0, 1);
  return out;
}

bool drift_affine(const ModelSpec& model) {
  return model.drift_family != DriftFamily::Custom;
}

Eigen::Vector2d drift_integral(const ModelSpec& model,
                               const std::vector<double>& theta, double a,
                               double b) {
  switch (model.drift_family) {
    case DriftFamily::None:
      return Eigen::Vector2d::Zero();
    case DriftFamily::SineAffine: {
      const double s = std::cos(a) - std::cos(b);  // integral of sin over (a,b]
      return {(1.0 + theta[0]) * s, (-1.0 + theta[1]) * s};
    }
    case DriftFamily::Custom: {
      Eigen::Vector2d out;
      for (int l = 0; l < 2; ++l) {
        out(l) = adaptive_simpson(
            [&](double t) { return eval_drift(model, theta, t)(l); }, a, b);
      }
      return out;
    }
  }
  throw ConfigError("unknown drift family");
}

Eigen::Vector2d drift_integral_term(const ModelSpec& model, int term, double a,
                                    double b) {
  if (!drift_affine(model)) throw ConfigError("drift is not affine");
  if (model.drift_family == DriftFamily::None) return Eigen::Vector2d::Zero();
  const double s = std::cos(a) - std::cos(b);
  if (term < 0) return {s, -s};       // theta = 0 base
  if (term == 0) return {s, 0.0};     // d/d theta1
  if (term == 1) return {0.0, s};     // d/d theta2
  throw ConfigError("drift term out of range");
}

}  // namespace qlrt
