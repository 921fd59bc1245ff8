#include <doctest.h>

#include <cmath>
#include <vector>

#include "qlrt/rng.hpp"
#include "qlrt/stats.hpp"

using namespace qlrt;

TEST_CASE("seed derivation is stable and stream-separating") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));

  Rng a(derive_seed(9, 4));
  Rng b(derive_seed(9, 4));
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
}

TEST_CASE("uniforms land in [0,1) and exponentials have the right mean") {
  Rng rng(derive_seed(11, 0));
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += rng.exponential(4.0);
  }
  CHECK(sum / 20000.0 == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("chi-square survival function closed forms") {
  CHECK(chi2_sf(0.0, 1) == 1.0);
  CHECK(chi2_sf(0.0, 5) == 1.0);
  for (double x = 0.0; x <= 20.0; x += 0.37) {
    CHECK(std::fabs(chi2_sf(x, 2) - std::exp(-0.5 * x)) < 1e-12);
  }
  CHECK(chi2_sf(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-5));
}

TEST_CASE("chi-square quantile inverts the survival function") {
  for (double a : {0.10, 0.05, 0.01}) {
    CHECK(std::fabs(chi2_quantile(a, 2) - (-2.0 * std::log(a))) < 1e-9);
    for (int r : {1, 2, 3}) {
      CHECK(std::fabs(chi2_sf(chi2_quantile(a, r), r) - a) < 1e-9);
    }
  }
  CHECK(chi2_quantile(0.05, 1) == doctest::Approx(3.841459).epsilon(1e-5));
}

TEST_CASE("normal quantile and cdf round trip") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
  for (double p = 0.001; p < 1.0; p += 0.0173) {
    CHECK(std::fabs(normal_cdf(normal_quantile(p)) - p) < 1e-9);
  }
  CHECK(normal_sf(0.0) == doctest::Approx(0.5));
}

TEST_CASE("ks statistic of a single median sample is one half") {
  const double x = chi2_quantile(0.5, 1);
  const auto [d, p] = ks_vs_chi2({x}, 1);
  CHECK(d == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p > 0.5);
}

TEST_CASE("ks accepts chi2(1) draws and flags chi2(3) draws") {
  int accepted = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng rng(derive_seed(77, static_cast<std::uint64_t>(rep)));
    std::vector<double> draws(2000);
    for (auto& v : draws) {
      const double z = rng.normal();
      v = z * z;
    }
    const auto [d, p] = ks_vs_chi2(draws, 1);
    if (p > 0.01) ++accepted;
  }
  CHECK(accepted >= 95);

  Rng rng(derive_seed(78, 0));
  std::vector<double> wrong(2000);
  for (auto& v : wrong) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double z = rng.normal();
      s += z * z;
    }
    v = s;
  }
  const auto [d, p] = ks_vs_chi2(wrong, 1);
  CHECK(p < 0.001);
}

TEST_CASE("kolmogorov distribution near the textbook critical point") {
  CHECK(kolmogorov_sf(1.358) == doctest::Approx(0.05).epsilon(0.02));
  CHECK(kolmogorov_sf(0.0) == 1.0);
  CHECK(kolmogorov_sf(3.0) < 1e-7);
}
