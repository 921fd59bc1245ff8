// Timing comparison of the likelihood evaluation paths and of serial vs
// parallel experiment execution. Run: qlrt_bench [dataset-scale]
//
//   likelihood  - evaluations/second of h1 on one dataset, dense reference
//                 vs the eigen-accelerated path, unblocked vs blocked
//   experiment  - wall time of a small replicated experiment with 1 worker
//                 vs all hardware workers (identical output either way)

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "qlrt/mc.hpp"
#include "qlrt/quasi_lik.hpp"
#include "qlrt/rng.hpp"
#include "qlrt/simulate.hpp"

using namespace qlrt;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

NonsyncData make_dataset(double lambda1, double lambda2, double horizon,
                         std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0, 0));
  const ModelSpec model = ModelSpec::const_triangular();
  const ObservationGrid g1 = gen_poisson_grid(lambda1, horizon, rng, 1);
  const ObservationGrid g2 = gen_poisson_grid(lambda2, horizon, rng, 2);
  return simulate_and_sample(model, {2.0, 2.0, 0.0}, {}, g1, g2,
                             horizon / 1000.0, rng);
}

void bench_likelihood(double scale) {
  const double horizon = 1.0;
  const NonsyncData data =
      make_dataset(2000.0 * scale, 3000.0 * scale, horizon, 7);
  const ModelSpec model = ModelSpec::const_triangular();
  const int m1 = data.grid1.interval_count();
  const int m2 = data.grid2.interval_count();
  std::printf("dataset: %d + %d intervals\n", m1, m2);

  const std::vector<double> sigma{2.0, 2.0, 0.1};
  struct Case {
    const char* name;
    int blocks;
    LikelihoodEvaluator::Mode mode;
    int evals;
  };
  const Case cases[] = {
      {"dense unblocked", 1, LikelihoodEvaluator::Mode::Dense, 3},
      {"dense blocked  ", 0, LikelihoodEvaluator::Mode::Dense, 20},
      {"fast unblocked ", 1, LikelihoodEvaluator::Mode::Fast, 50},
      {"fast blocked   ", 0, LikelihoodEvaluator::Mode::Fast, 2000},
  };
  for (const auto& c : cases) {
    const double t0 = now_s();
    LikelihoodEvaluator ev(model, data, c.blocks, c.mode);
    const double t1 = now_s();
    double value = 0.0;
    for (int i = 0; i < c.evals; ++i) value = ev.h1(sigma);
    const double t2 = now_s();
    std::printf(
        "%s  blocks=%3d  setup %8.1f ms  eval %10.3f ms  h1=%.10g\n", c.name,
        ev.block_count(), (t1 - t0) * 1e3, (t2 - t1) * 1e3 / c.evals, value);
  }
}

void bench_experiment() {
  ExperimentConfig ec;
  ec.model = ModelSpec::const_triangular();
  ec.test = "sigma";
  ec.n = 200;
  ec.h = 1.0 / 200;
  ec.horizon = 1.0;
  ec.lambda1 = 400;
  ec.lambda2 = 600;
  ec.sigma_true = {2.0, 2.0, 0.0};
  ec.sweep_values = {0.0};
  ec.swept_coord = 2;
  ec.tested = {2};
  ec.iterations = 40;
  ec.seed = 11;
  ec.alphas = {0.05};

  ec.workers = 1;
  const double t0 = now_s();
  const ExperimentReport serial = run_experiment(ec);
  const double t1 = now_s();
  ec.workers = 0;
  const ExperimentReport parallel = run_experiment(ec);
  const double t2 = now_s();
  const bool identical =
      report_csv_string(serial) == report_csv_string(parallel);
  std::printf(
      "experiment (%d reps): serial %.2f s, parallel %.2f s, speedup %.2fx, "
      "reports identical: %s\n",
      ec.iterations, t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1),
      identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  double scale = 1.0;
  if (argc > 1) scale = std::stod(argv[1]);
  bench_likelihood(scale);
  bench_experiment();
  return 0;
}
