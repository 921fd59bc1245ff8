#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

namespace qlrt {

enum class DriftFamily {
  None,        // driftless
  SineAffine,  // mu(theta) = ((1+theta1) sin t, (-1+theta2) sin t)
  Custom,
};

enum class DiffusionFamily {
  ConstTriangular,  // b = [[s1, s3], [0, s2]], constant in t
  SineModulated,    // ConstTriangular scaled by 1 + sin(2 pi t)/2
  Custom,
};

struct Interval {
  double lo = -10.0;
  double hi = 10.0;
};

using Box = std::vector<Interval>;

// Parameterized SDE coefficient families plus parameter boxes. The built-in
// families cover the bundled experiments; custom callbacks extend to
// arbitrary deterministic coefficients at reduced speed (generic quadrature,
// dense likelihood path).
struct ModelSpec {
  DriftFamily drift_family = DriftFamily::None;
  DiffusionFamily diffusion_family = DiffusionFamily::ConstTriangular;
  Box sigma_box;  // length d1
  Box theta_box;  // length d2 (empty for driftless)

  // Coordinate order used when a test pins "the first r" parameters: the
  // built-in diffusion families list the cross term first because zeroing a
  // diagonal entry makes the diffusion singular.
  std::vector<int> sigma_test_order;  // 0-based
  std::vector<int> theta_test_order;

  std::function<Eigen::Vector2d(const std::vector<double>&, double)>
      custom_drift;  // (theta, t) -> mu_t
  std::function<Eigen::Matrix2d(const std::vector<double>&, double)>
      custom_diffusion;  // (sigma, t) -> b_t
  int custom_sigma_dim = 0;
  int custom_theta_dim = 0;

  int sigma_dim() const;
  int theta_dim() const;

  static ModelSpec const_triangular();   // driftless, constant diffusion
  static ModelSpec sine_modulated();     // driftless, time-varying diffusion
  static ModelSpec sine_drift();         // sine drift + constant diffusion
};

// mu_t(theta); the driftless family returns the zero vector.
Eigen::Vector2d eval_drift(const ModelSpec& model,
                           const std::vector<double>& theta, double t);

// b_t(sigma).
Eigen::Matrix2d eval_diffusion(const ModelSpec& model,
                               const std::vector<double>& sigma, double t);

// Sigma_t(sigma) = b_t b_t^T(sigma).
Eigen::Matrix2d sigma_matrix(const ModelSpec& model,
                             const std::vector<double>& sigma, double t);

// True iff Sigma_t(sigma) = weight(t) * C(sigma) with a sigma-free scalar
// weight. Holds for every built-in diffusion family and enables the
// eigenvalue-based likelihood path.
bool diffusion_separable(const ModelSpec& model);

// C(sigma) for separable families (the weight is normalized so that
// weight == 1 identically for the constant family).
Eigen::Matrix2d diffusion_const_matrix(const ModelSpec& model,
                                       const std::vector<double>& sigma);

// Integral of the scalar weight over (a, b]; closed form per family.
double diffusion_weight_integral(const ModelSpec& model, double a, double b);

// 2x2 PD check used for parameter feasibility.
bool spd2x2(const Eigen::Matrix2d& m);

// Entrywise integral of Sigma_t(sigma) over (a, b]. Closed form for the
// built-in families, adaptive Simpson (abs tol 1e-10) for custom ones.
Eigen::Matrix2d sigma_integral(const ModelSpec& model,
                               const std::vector<double>& sigma, double a,
                               double b);

// True iff mu_t(theta) = base(t) + sum_j theta_j basis_j(t). Lets the
// likelihood precompute drift integrals once per dataset.
bool drift_affine(const ModelSpec& model);

// Integral of mu_t(theta) over (a, b].
Eigen::Vector2d drift_integral(const ModelSpec& model,
                               const std::vector<double>& theta, double a,
                               double b);

// Affine decomposition of the drift integral: term -1 is the base, terms
// 0..d2-1 the per-coordinate basis columns.
Eigen::Vector2d drift_integral_term(const ModelSpec& model, int term, double a,
                                    double b);

// Adaptive Simpson quadrature backing the custom-coefficient paths.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol = 1e-10);

}  // namespace qlrt
