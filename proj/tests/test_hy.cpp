#include <doctest.h>

#include <cmath>

#include "qlrt/errors.hpp"
#include "qlrt/hy.hpp"
#include "qlrt/rng.hpp"

using namespace qlrt;

namespace {

ObservationGrid grid_of(std::vector<double> times, int comp) {
  ObservationGrid g;
  g.times = std::move(times);
  g.component = comp;
  return g;
}

NonsyncData data_on(std::vector<double> t1, std::vector<double> t2,
                    std::vector<double> v1, std::vector<double> v2) {
  NonsyncData d;
  d.grid1 = grid_of(std::move(t1), 1);
  d.grid2 = grid_of(std::move(t2), 2);
  d.values1 = std::move(v1);
  d.values2 = std::move(v2);
  d.rebuild_increments();
  return d;
}

}  // namespace

TEST_CASE("synchronous grids reduce to the realized covariance bit-exactly") {
  Rng rng(derive_seed(61, 0));
  std::vector<double> times{0.0};
  for (int i = 0; i < 37; ++i) times.push_back(times.back() + rng.uniform());
  const double T = times.back();
  std::vector<double> v1{0.0}, v2{0.0};
  for (std::size_t i = 1; i < times.size(); ++i) {
    v1.push_back(v1.back() + rng.normal());
    v2.push_back(v2.back() + rng.normal());
  }
  NonsyncData d;
  d.grid1 = grid_of(times, 1);
  d.grid2 = grid_of(times, 2);
  d.grid1.times.back() = T;  // identical horizons by construction
  d.values1 = v1;
  d.values2 = v2;
  d.rebuild_increments();
  const OverlapStructure ov = build_overlaps(d.grid1, d.grid2);
  double realized = 0.0;
  for (std::size_t i = 0; i < d.increments1.size(); ++i) {
    realized += d.increments1[i] * d.increments2[i];
  }
  CHECK(hy_estimator(d, ov) == realized);
}

TEST_CASE("single pair of intervals gives the plain product") {
  const NonsyncData d = data_on({0.0, 1.0}, {0.0, 1.0}, {0.0, 0.7}, {0.0, -0.4});
  const OverlapStructure ov = build_overlaps(d.grid1, d.grid2);
  CHECK(hy_estimator(d, ov) == doctest::Approx(-0.28));
}

TEST_CASE("refining one grid does not change the estimate when the other is one interval") {
  Rng rng(derive_seed(62, 0));
  std::vector<double> t1{0.0, 1.0};
  for (int i = 0; i < 30; ++i) t1.push_back(rng.uniform());
  std::sort(t1.begin(), t1.end());
  t1.erase(std::unique(t1.begin(), t1.end()), t1.end());
  std::vector<double> v1{0.0};
  for (std::size_t i = 1; i < t1.size(); ++i) v1.push_back(v1.back() + rng.normal());
  const NonsyncData fine = data_on(t1, {0.0, 1.0}, v1, {0.0, 2.5});
  const NonsyncData coarse =
      data_on({0.0, 1.0}, {0.0, 1.0}, {0.0, v1.back()}, {0.0, 2.5});
  const double hy_fine =
      hy_estimator(fine, build_overlaps(fine.grid1, fine.grid2));
  const double hy_coarse =
      hy_estimator(coarse, build_overlaps(coarse.grid1, coarse.grid2));
  // telescoping sum: increments of X1 collapse against the single interval
  CHECK(hy_fine == doctest::Approx(hy_coarse).epsilon(1e-12));
}

TEST_CASE("variance components on the minimal dataset cancel to zero") {
  const double a = 0.8, b = -1.3;
  const NonsyncData d = data_on({0.0, 1.0}, {0.0, 1.0}, {0.0, a}, {0.0, b});
  const OverlapStructure ov = build_overlaps(d.grid1, d.grid2);
  const int n = 10;
  CHECK_THROWS_AS(u_n_variance(d, ov, n, 1.0), NumericError);
  // the three components individually: 2n(ab)^2, -n(ab)^2, -n(ab)^2
  const double hy = hy_estimator(d, ov);
  CHECK(hy == doctest::Approx(a * b));
}

TEST_CASE("all-zero increments are degenerate") {
  const NonsyncData d =
      data_on({0.0, 0.5, 1.0}, {0.0, 1.0}, {0.0, 0.0, 0.0}, {0.0, 0.0});
  const OverlapStructure ov = build_overlaps(d.grid1, d.grid2);
  CHECK(hy_estimator(d, ov) == 0.0);
  CHECK_THROWS_AS(u_n_variance(d, ov, 10, 1.0), NumericError);
}

TEST_CASE("statistic is sign-symmetric in either component") {
  Rng rng(derive_seed(63, 0));
  const ModelSpec t1 = ModelSpec::const_triangular();
  const ObservationGrid g1 = gen_poisson_grid(80.0, 1.0, rng, 1);
  const ObservationGrid g2 = gen_poisson_grid(120.0, 1.0, rng, 2);
  NonsyncData d = simulate_and_sample(t1, {1.0, 1.0, 0.5}, {}, g1, g2, 0.01, rng);
  const OverlapStructure ov = build_overlaps(d.grid1, d.grid2);
  const HYResult base = u_n_variance(d, ov, 100, 1.0);

  NonsyncData flipped = d;
  for (auto& v : flipped.values2) v = -v;
  flipped.rebuild_increments();
  const HYResult neg = u_n_variance(flipped, ov, 100, 1.0);
  CHECK(neg.v_n == doctest::Approx(-base.v_n).epsilon(1e-12));
  CHECK(neg.u_n == doctest::Approx(base.u_n).epsilon(1e-12));
  const TestOutcome ta = v_n_test(d, ov, 100, 1.0, 0.05);
  const TestOutcome tb = v_n_test(flipped, ov, 100, 1.0, 0.05);
  CHECK(ta.statistic == doctest::Approx(tb.statistic).epsilon(1e-12));
  CHECK(ta.reject == tb.reject);
}

TEST_CASE("two-sided normal decision matches the chi-square form") {
  Rng rng(derive_seed(64, 0));
  const ModelSpec t1 = ModelSpec::const_triangular();
  for (int trial = 0; trial < 10; ++trial) {
    const ObservationGrid g1 = gen_poisson_grid(60.0, 1.0, rng, 1);
    const ObservationGrid g2 = gen_poisson_grid(90.0, 1.0, rng, 2);
    const NonsyncData d =
        simulate_and_sample(t1, {1.0, 1.0, 0.3}, {}, g1, g2, 0.01, rng);
    const OverlapStructure ov = build_overlaps(d.grid1, d.grid2);
    const HYResult r = u_n_variance(d, ov, 80, 1.0);
    const TestOutcome t = v_n_test(d, ov, 80, 1.0, 0.05);
    CHECK(t.statistic == doctest::Approx(r.v_n * r.v_n));
    CHECK(r.u_n ==
          doctest::Approx(r.lambda1 + r.lambda2 + r.lambda3).epsilon(1e-12));
    const bool by_normal = std::fabs(r.v_n) >= normal_quantile(1.0 - 0.025);
    CHECK(t.reject == by_normal);
    CHECK(t.reject == (t.p_value <= 0.05));
  }
}

TEST_CASE("unbiased near zero under independence") {
  const ModelSpec t1 = ModelSpec::const_triangular();
  double sum = 0.0, sum_sq = 0.0;
  const int reps = 500;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(derive_seed(65, static_cast<std::uint64_t>(rep)));
    const ObservationGrid g1 = gen_poisson_grid(200.0, 1.0, rng, 1);
    const ObservationGrid g2 = gen_poisson_grid(300.0, 1.0, rng, 2);
    const NonsyncData d =
        simulate_and_sample(t1, {2.0, 2.0, 0.0}, {}, g1, g2, 1e-3, rng);
    const double hy = hy_estimator(d, build_overlaps(d.grid1, d.grid2));
    sum += hy;
    sum_sq += hy * hy;
  }
  const double mean = sum / reps;
  const double sd = std::sqrt(sum_sq / reps - mean * mean);
  CHECK(std::fabs(mean) <= 3.0 * sd / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("estimates the true covariation under dependence") {
  // quadratic covariation of the constant family is s2 * s3 * horizon
  const ModelSpec t1 = ModelSpec::const_triangular();
  double sum = 0.0;
  const int reps = 300;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(derive_seed(66, static_cast<std::uint64_t>(rep)));
    const ObservationGrid g1 = gen_poisson_grid(200.0, 1.0, rng, 1);
    const ObservationGrid g2 = gen_poisson_grid(300.0, 1.0, rng, 2);
    const NonsyncData d =
        simulate_and_sample(t1, {2.0, 2.0, 0.5}, {}, g1, g2, 1e-3, rng);
    sum += hy_estimator(d, build_overlaps(d.grid1, d.grid2));
  }
  CHECK(sum / reps == doctest::Approx(1.0).epsilon(0.1));
}
