#include <doctest.h>

#include <cmath>

#include "qlrt/errors.hpp"
#include "qlrt/model.hpp"

using namespace qlrt;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("drift families evaluate the bundled formulas") {
  const ModelSpec t3 = ModelSpec::sine_drift();
  const Eigen::Vector2d a = eval_drift(t3, {0.0, 0.0}, kPi / 2.0);
  CHECK(a(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a(1) == doctest::Approx(-1.0).epsilon(1e-14));

  const Eigen::Vector2d b = eval_drift(t3, {1.0, 0.0}, kPi / 2.0);
  CHECK(b(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(b(1) == doctest::Approx(-1.0).epsilon(1e-14));

  const ModelSpec none = ModelSpec::const_triangular();
  const Eigen::Vector2d z = eval_drift(none, {}, 0.7);
  CHECK(z(0) == 0.0);
  CHECK(z(1) == 0.0);
}

TEST_CASE("diffusion families evaluate the bundled formulas") {
  const ModelSpec t1 = ModelSpec::const_triangular();
  const Eigen::Matrix2d b = eval_diffusion(t1, {2.0, 2.0, 0.0}, 0.0);
  CHECK(b(0, 0) == 2.0);
  CHECK(b(0, 1) == 0.0);
  CHECK(b(1, 0) == 0.0);
  CHECK(b(1, 1) == 2.0);

  const ModelSpec t2 = ModelSpec::sine_modulated();
  const Eigen::Matrix2d bt = eval_diffusion(t2, {1.0, 1.0, 0.0}, 0.25);
  CHECK(bt(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(bt(1, 1) == doctest::Approx(1.5).epsilon(1e-14));

  const Eigen::Matrix2d s = sigma_matrix(t1, {1.0, 1.0, 1.0}, 0.0);
  CHECK(s(0, 0) == doctest::Approx(2.0));
  CHECK(s(0, 1) == doctest::Approx(1.0));
  CHECK(s(1, 0) == doctest::Approx(1.0));
  CHECK(s(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("sigma matrix is exactly symmetric and PD iff diagonal entries are nonzero") {
  const ModelSpec t1 = ModelSpec::const_triangular();
  const ModelSpec t2 = ModelSpec::sine_modulated();
  const double vals[] = {-2.0, -0.5, 0.0, 0.5, 2.0};
  for (double s1 : vals) {
    for (double s2 : vals) {
      for (double s3 : vals) {
        for (double t : {0.0, 0.3, 1.7}) {
          const Eigen::Matrix2d m = sigma_matrix(t1, {s1, s2, s3}, t);
          CHECK(m(0, 1) == m(1, 0));
          const bool pd = spd2x2(m);
          CHECK(pd == (s1 != 0.0 && s2 != 0.0));
          const Eigen::Matrix2d mt = sigma_matrix(t2, {s1, s2, s3}, t);
          CHECK(spd2x2(mt) == pd);
        }
      }
    }
  }
}

TEST_CASE("sine-modulated family scales the constant family entrywise") {
  const ModelSpec t1 = ModelSpec::const_triangular();
  const ModelSpec t2 = ModelSpec::sine_modulated();
  const std::vector<double> sigma{1.3, 0.8, -0.4};
  for (double t = 0.0; t < 2.0; t += 0.0831) {
    const double f = 1.0 + 0.5 * std::sin(2.0 * kPi * t);
    const Eigen::Matrix2d a = sigma_matrix(t1, sigma, t) * f * f;
    const Eigen::Matrix2d b = sigma_matrix(t2, sigma, t);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        CHECK(b(r, c) == doctest::Approx(a(r, c)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("weight integral matches quadrature of the squared modulation") {
  const ModelSpec t2 = ModelSpec::sine_modulated();
  const auto w = [](double t) {
    const double m = 1.0 + 0.5 * std::sin(2.0 * kPi * t);
    return m * m;
  };
  for (auto [a, b] : std::vector<std::pair<double, double>>{
           {0.0, 1.0}, {0.13, 0.77}, {2.4, 5.9}, {0.0, 0.001}}) {
    const double closed = diffusion_weight_integral(t2, a, b);
    const double quad = adaptive_simpson(w, a, b, 1e-12);
    CHECK(closed == doctest::Approx(quad).epsilon(1e-10));
  }
  CHECK(diffusion_weight_integral(ModelSpec::const_triangular(), 0.2, 1.7) ==
        doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("sigma integral closed form agrees with quadrature") {
  const ModelSpec t2 = ModelSpec::sine_modulated();
  const std::vector<double> sigma{1.0, 2.0, 0.5};
  const Eigen::Matrix2d closed = sigma_integral(t2, sigma, 0.2, 0.9);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double quad = adaptive_simpson(
          [&](double t) { return sigma_matrix(t2, sigma, t)(r, c); }, 0.2, 0.9,
          1e-12);
      CHECK(closed(r, c) == doctest::Approx(quad).epsilon(1e-9));
    }
  }
}

TEST_CASE("drift integral terms recompose the closed form") {
  const ModelSpec t3 = ModelSpec::sine_drift();
  const std::vector<double> theta{0.7, -0.3};
  const Eigen::Vector2d direct = drift_integral(t3, theta, 0.4, 2.1);
  const Eigen::Vector2d recomposed = drift_integral_term(t3, -1, 0.4, 2.1) +
                                     theta[0] * drift_integral_term(t3, 0, 0.4, 2.1) +
                                     theta[1] * drift_integral_term(t3, 1, 0.4, 2.1);
  CHECK(direct(0) == doctest::Approx(recomposed(0)).epsilon(1e-14));
  CHECK(direct(1) == doctest::Approx(recomposed(1)).epsilon(1e-14));
  const double quad = adaptive_simpson(
      [&](double t) { return eval_drift(t3, theta, t)(0); }, 0.4, 2.1, 1e-12);
  CHECK(direct(0) == doctest::Approx(quad).epsilon(1e-10));
}

TEST_CASE("custom coefficient hooks route through quadrature") {
  ModelSpec m;
  m.diffusion_family = DiffusionFamily::Custom;
  m.custom_sigma_dim = 1;
  m.sigma_box = {Interval{0.1, 5.0}};
  m.custom_diffusion = [](const std::vector<double>& s, double t) {
    Eigen::Matrix2d b = Eigen::Matrix2d::Identity();
    b(0, 0) = s[0] * (1.0 + t);
    b(1, 1) = s[0];
    return b;
  };
  CHECK(!diffusion_separable(m));
  const Eigen::Matrix2d integ = sigma_integral(m, {2.0}, 0.0, 1.0);
  // integral of 4 (1+t)^2 over (0,1] = 4 * 7/3
  CHECK(integ(0, 0) == doctest::Approx(28.0 / 3.0).epsilon(1e-9));
  CHECK(integ(1, 1) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(integ(0, 1) == doctest::Approx(0.0));
}
