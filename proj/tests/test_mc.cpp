#include <doctest.h>

#include <cmath>

#include "qlrt/errors.hpp"
#include "qlrt/mc.hpp"

using namespace qlrt;

namespace {

// Small constant-diffusion test experiment: quick but statistically alive.
ExperimentConfig small_sigma_config() {
  ExperimentConfig ec;
  ec.model = ModelSpec::const_triangular();
  ec.test = "sigma";
  ec.n = 200;
  ec.h = 0.005;
  ec.horizon = 1.0;
  ec.lambda1 = 300.0;
  ec.lambda2 = 450.0;
  ec.sigma_true = {2.0, 2.0, 0.0};
  ec.sweep_values = {0.0};
  ec.swept_coord = 2;
  ec.tested = {2};
  ec.alphas = {0.10, 0.05};
  ec.iterations = 24;
  ec.seed = 9001;
  return ec;
}

}  // namespace

TEST_CASE("reports are byte-identical across worker counts and reruns") {
  ExperimentConfig ec = small_sigma_config();
  ec.workers = 1;
  const std::string serial = report_csv_string(run_experiment(ec));
  ec.workers = 4;
  const std::string parallel = report_csv_string(run_experiment(ec));
  CHECK(serial == parallel);
  const std::string again = report_csv_string(run_experiment(ec));
  CHECK(serial == again);
}

TEST_CASE("rates are exact counts over iterations") {
  ExperimentConfig ec = small_sigma_config();
  const ExperimentReport r = run_experiment(ec);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    const double scaled = row.rejection_rate * row.iterations;
    CHECK(std::fabs(scaled - std::llround(scaled)) < 1e-9);
    CHECK(row.iterations == 24);
    CHECK(row.failures == 0);
  }
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0].size() == 24);
}

TEST_CASE("a single iteration yields a zero-or-one rate") {
  ExperimentConfig ec = small_sigma_config();
  ec.iterations = 1;
  ec.alphas = {0.05};
  const ExperimentReport r = run_experiment(ec);
  REQUIRE(r.rows.size() == 1);
  CHECK((r.rows[0].rejection_rate == 0.0 || r.rows[0].rejection_rate == 1.0));
}

TEST_CASE("power increases along the local-alternative sweep") {
  ExperimentConfig ec = small_sigma_config();
  const double root_n = std::sqrt(static_cast<double>(ec.n));
  ec.sweep_values = {1.0 / root_n, 4.0 / root_n};
  ec.alphas = {0.05};
  ec.iterations = 150;
  ec.seed = 424242;
  const ExperimentReport r = run_experiment(ec);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[1].rejection_rate > r.rows[0].rejection_rate);
}

TEST_CASE("ks rows appear on request") {
  ExperimentConfig ec = small_sigma_config();
  ec.with_ks = true;
  const ExperimentReport r = run_experiment(ec);
  REQUIRE(r.ks.size() == 1);
  CHECK(r.ks[0].p >= 0.0);
  CHECK(r.ks[0].p <= 1.0);
  CHECK(r.ks[0].d > 0.0);
}

TEST_CASE("theta experiments run the adaptive two-stage scheme") {
  ExperimentConfig ec;
  ec.model = ModelSpec::sine_drift();
  ec.test = "theta";
  ec.n = 100;
  ec.h = 0.1;
  ec.horizon = 10.0;
  ec.lambda1 = 30.0;
  ec.lambda2 = 45.0;
  ec.sigma_true = {1.0, 1.0, 0.5};
  ec.theta_true = {0.0, 0.0};
  ec.sweep_values = {0.0};
  ec.swept_coord = 0;
  ec.tested = {0};
  ec.alphas = {0.05};
  ec.iterations = 12;
  ec.seed = 31337;
  ec.fine_step = 0.01;
  const ExperimentReport r = run_experiment(ec);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].failures == 0);
}

TEST_CASE("mostly-degenerate replications abort with a quality error") {
  ExperimentConfig ec;
  ec.model = ModelSpec::const_triangular();
  ec.test = "hy";
  ec.n = 3;
  ec.h = 1.0 / 3.0;
  ec.horizon = 1.0;
  // almost no arrivals: the variance estimate degenerates on most draws
  ec.lambda1 = 0.2;
  ec.lambda2 = 0.2;
  ec.sigma_true = {1.0, 1.0, 0.0};
  ec.sweep_values = {0.0};
  ec.swept_coord = 2;
  ec.alphas = {0.05};
  ec.iterations = 20;
  ec.seed = 5;
  CHECK_THROWS_AS(run_experiment(ec), NumericError);
}

TEST_CASE("config validation rejects inconsistent sampling designs") {
  ExperimentConfig ec = small_sigma_config();
  ec.h = 0.001;  // n*h != horizon
  CHECK_THROWS_AS(run_experiment(ec), ConfigError);
  ec = small_sigma_config();
  ec.model = ModelSpec::sine_modulated();
  ec.test = "hy";
  CHECK_THROWS_AS(run_experiment(ec), ConfigError);
  ec = small_sigma_config();
  ec.alphas = {1.5};
  CHECK_THROWS_AS(run_experiment(ec), ConfigError);
}

TEST_CASE("report CSV carries the pinned schema") {
  ExperimentConfig ec = small_sigma_config();
  ec.alphas = {0.05};
  const std::string csv = report_csv_string(run_experiment(ec));
  CHECK(csv.rfind("true_value,alpha,rejection_rate,iterations,failures\n", 0) ==
        0);
  CHECK(csv.find("0,0.05,") != std::string::npos);
}
