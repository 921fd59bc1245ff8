#include "qlrt/mc.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "qlrt/errors.hpp"
#include "qlrt/hy.hpp"
#include "qlrt/rng.hpp"
#include "qlrt/simulate.hpp"

namespace qlrt {

void ExperimentConfig::validate() const {
  if (test != "sigma" && test != "theta" && test != "hy") {
    throw ConfigError("test must be one of sigma, theta, hy");
  }
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (n > 0 && h > 0.0 && std::fabs(n * h - horizon) > 1e-9 * horizon) {
    throw ConfigError("inconsistent n, h, horizon: horizon must equal n*h");
  }
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw ConfigError("lambda1 and lambda2 must be positive");
  }
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  }
  if (static_cast<int>(sigma_true.size()) != model.sigma_dim()) {
    throw ConfigError("sigma has wrong dimension for the model");
  }
  if (static_cast<int>(theta_true.size()) != model.theta_dim()) {
    throw ConfigError("theta has wrong dimension for the model");
  }
  if (sweep_values.empty()) throw ConfigError("no true values to sweep");
  const int dim = test == "theta" ? model.theta_dim() : model.sigma_dim();
  if (swept_coord < 0 || swept_coord >= dim) {
    throw ConfigError("swept coordinate out of range");
  }
  if (test == "hy") {
    if (model.diffusion_family == DiffusionFamily::SineModulated) {
      throw ConfigError(
          "the covariation test requires a time-invariant diffusion");
    }
    if (n < 1) throw ConfigError("the covariation test needs n");
  } else if (tested.empty()) {
    throw ConfigError("no tested coordinates");
  }
  if (test == "theta" && model.theta_dim() < 1) {
    throw ConfigError("theta test needs a drift parameter");
  }
}

namespace {

struct RepResult {
  bool failed = false;
  double statistic = 0.0;
  double p_value = 1.0;
};

RepResult run_one(const ExperimentConfig& cfg, int sweep_idx, int rep) {
  RepResult out;
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(sweep_idx),
                      static_cast<std::uint64_t>(rep)));
  std::vector<double> sigma = cfg.sigma_true;
  std::vector<double> theta = cfg.theta_true;
  const double value = cfg.sweep_values[static_cast<std::size_t>(sweep_idx)];
  if (cfg.test == "theta") {
    theta[static_cast<std::size_t>(cfg.swept_coord)] = value;
  } else {
    sigma[static_cast<std::size_t>(cfg.swept_coord)] = value;
  }
  const double fine =
      cfg.fine_step > 0.0
          ? cfg.fine_step
          : (cfg.h > 0.0 ? cfg.h / 10.0 : cfg.horizon / 10000.0);
  try {
    const ObservationGrid g1 = gen_poisson_grid(cfg.lambda1, cfg.horizon, rng, 1);
    const ObservationGrid g2 = gen_poisson_grid(cfg.lambda2, cfg.horizon, rng, 2);
    const NonsyncData data =
        simulate_and_sample(cfg.model, sigma, theta, g1, g2, fine, rng);
    const double alpha0 = cfg.alphas.front();
    if (cfg.test == "sigma") {
      const TestOutcome t =
          test_sigma(data, cfg.model, cfg.tested, cfg.block_count, alpha0);
      out.statistic = t.statistic;
      out.p_value = t.p_value;
    } else if (cfg.test == "theta") {
      const std::vector<double> sigma_hat =
          fit_sigma(data, cfg.model, cfg.block_count);
      const TestOutcome t = test_theta(data, cfg.model, cfg.tested, sigma_hat,
                                       cfg.block_count, alpha0);
      out.statistic = t.statistic;
      out.p_value = t.p_value;
    } else {
      const OverlapStructure ov = build_overlaps(data.grid1, data.grid2);
      const TestOutcome t = v_n_test(data, ov, cfg.n, cfg.horizon, alpha0);
      out.statistic = t.statistic;
      out.p_value = t.p_value;
    }
  } catch (const NumericError&) {
    out.failed = true;
  }
  return out;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int sweeps = static_cast<int>(cfg.sweep_values.size());
  const int its = cfg.iterations;
  std::vector<std::vector<RepResult>> results(
      static_cast<std::size_t>(sweeps),
      std::vector<RepResult>(static_cast<std::size_t>(its)));

  const long total = static_cast<long>(sweeps) * its;
#ifdef _OPENMP
  int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (long job = 0; job < total; ++job) {
    const int sv = static_cast<int>(job / its);
    const int rep = static_cast<int>(job % its);
    results[static_cast<std::size_t>(sv)][static_cast<std::size_t>(rep)] =
        run_one(cfg, sv, rep);
  }

  ExperimentReport report;
  const int df = cfg.test == "hy" ? 1 : static_cast<int>(cfg.tested.size());
  for (int sv = 0; sv < sweeps; ++sv) {
    const auto& reps = results[static_cast<std::size_t>(sv)];
    const std::string label =
        format_value(cfg.sweep_values[static_cast<std::size_t>(sv)]);
    int failures = 0;
    std::vector<double> sample;
    sample.reserve(reps.size());
    for (const auto& r : reps) {
      if (r.failed) {
        ++failures;
      } else {
        sample.push_back(r.statistic);
      }
    }
    if (failures * 100 > its) {
      throw NumericError("more than 1% of replications failed for true value " +
                         label);
    }
    for (double alpha : cfg.alphas) {
      int rejections = 0;
      for (const auto& r : reps) {
        if (!r.failed && r.p_value <= alpha) ++rejections;
      }
      report.rows.push_back({label, alpha,
                             static_cast<double>(rejections) / its, its,
                             failures});
    }
    if (cfg.with_ks && !sample.empty()) {
      const auto [d, p] = ks_vs_chi2(sample, df);
      report.ks.push_back({label, d, p});
    }
    report.samples.push_back(std::move(sample));
  }
  return report;
}

void write_report_csv(std::ostream& os, const ExperimentReport& report) {
  os << "true_value,alpha,rejection_rate,iterations,failures\n";
  char buf[160];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%s,%.12g,%.12g,%d,%d\n",
                  r.true_value.c_str(), r.alpha, r.rejection_rate,
                  r.iterations, r.failures);
    os << buf;
  }
}

std::string report_csv_string(const ExperimentReport& report) {
  std::ostringstream os;
  write_report_csv(os, report);
  return os.str();
}

void write_report_summary(std::ostream& os, const ExperimentConfig& config,
                          const ExperimentReport& report) {
  os << "test=" << config.test << " iterations=" << config.iterations
     << " seed=" << config.seed << "\n";
  for (const auto& r : report.rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "  true_value=%s alpha=%.4g rejection_rate=%.4g failures=%d\n",
                  r.true_value.c_str(), r.alpha, r.rejection_rate, r.failures);
    os << buf;
  }
  for (const auto& k : report.ks) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  ks true_value=%s D=%.6g p=%.6g\n",
                  k.true_value.c_str(), k.d, k.p);
    os << buf;
  }
}

}  // namespace qlrt
