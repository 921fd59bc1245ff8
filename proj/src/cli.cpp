#include "qlrt/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "qlrt/config.hpp"
#include "qlrt/errors.hpp"
#include "qlrt/hy.hpp"
#include "qlrt/mc.hpp"
#include "qlrt/rng.hpp"
#include "qlrt/simulate.hpp"

namespace qlrt {

namespace {

ModelSpec model_from_config(ConfigMap& cfg) {
  const std::string diffusion = cfg.get_string("diffusion", "constant");
  const std::string drift = cfg.get_string("drift", "none");
  ModelSpec m;
  if (diffusion == "constant") {
    m = ModelSpec::const_triangular();
  } else if (diffusion == "sine_modulated") {
    m = ModelSpec::sine_modulated();
  } else {
    throw ConfigError("key 'diffusion': unknown family '" + diffusion + "'");
  }
  if (drift == "sine") {
    m.drift_family = DriftFamily::SineAffine;
    m.theta_box = Box(2, Interval{});
    m.theta_test_order = {0, 1};
  } else if (drift != "none") {
    throw ConfigError("key 'drift': unknown family '" + drift + "'");
  }
  m.sigma_box = cfg.get_box("sigma_box", m.sigma_dim());
  if (m.theta_dim() > 0) m.theta_box = cfg.get_box("theta_box", m.theta_dim());
  return m;
}

std::vector<int> tested_from_config(ConfigMap& cfg, const std::vector<int>& order,
                                    int dim) {
  if (cfg.has("tested")) {
    std::vector<int> tested;
    for (int c : cfg.get_ints("tested", {})) {
      if (c < 1 || c > dim) {
        throw ConfigError("key 'tested': coordinate out of range");
      }
      tested.push_back(c - 1);  // keys are 1-based
    }
    if (tested.empty()) throw ConfigError("key 'tested': empty list");
    return tested;
  }
  return first_coords(order, cfg.get_int("r", 1));
}

// Resolve the (n, h, horizon) triple: any two determine the third; all three
// together must be consistent.
void resolve_sampling(ConfigMap& cfg, int& n, double& h, double& horizon) {
  n = cfg.get_int("n", 0);
  h = cfg.get_double("h", 0.0);
  horizon = cfg.get_double("horizon", 0.0);
  if (horizon <= 0.0) {
    if (n > 0 && h > 0.0) {
      horizon = n * h;
    } else {
      throw ConfigError("need 'horizon' or both 'n' and 'h'");
    }
  } else if (h <= 0.0 && n > 0) {
    h = horizon / n;
  } else if (n == 0 && h > 0.0) {
    n = static_cast<int>(std::llround(horizon / h));
  }
  if (n > 0 && h > 0.0 && std::fabs(n * h - horizon) > 1e-9 * horizon) {
    throw ConfigError("inconsistent n, h, horizon: horizon must equal n*h");
  }
}

void print_outcome(std::ostream& os, const TestOutcome& t) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s test: statistic=%.6g df=%d p_value=%.6g alpha=%.4g "
                "reject=%s%s\n",
                t.test.c_str(), t.statistic, t.df, t.p_value, t.alpha,
                t.reject ? "true" : "false",
                t.boundary_hit ? " (argmax near box boundary)" : "");
  os << buf;
  const auto print_vec = [&os](const char* name,
                               const std::vector<double>& v) {
    if (v.empty()) return;
    os << "  " << name << " = (";
    for (std::size_t i = 0; i < v.size(); ++i) {
      char num[32];
      std::snprintf(num, sizeof num, "%.6g", v[i]);
      os << (i ? ", " : "") << num;
    }
    os << ")\n";
  };
  print_vec("argmax_full", t.argmax_full);
  print_vec("argmax_null", t.argmax_null);
}

void write_outcomes(const std::string& out,
                    const std::vector<TestOutcome>& rows) {
  if (out.empty()) return;
  std::ofstream os(out);
  if (!os) throw ConfigError("cannot open for writing: " + out);
  write_outcome_csv(os, rows);
}

int cmd_simulate(ConfigMap& cfg) {
  const ModelSpec model = model_from_config(cfg);
  int n = 0;
  double h = 0.0, horizon = 0.0;
  resolve_sampling(cfg, n, h, horizon);
  const double lambda1 = cfg.require_double("lambda1");
  const double lambda2 = cfg.require_double("lambda2");
  const std::vector<double> sigma = cfg.require_doubles("sigma");
  std::vector<double> theta = cfg.get_doubles("theta", {});
  if (static_cast<int>(sigma.size()) != model.sigma_dim()) {
    throw ConfigError("key 'sigma': wrong dimension for the model");
  }
  if (static_cast<int>(theta.size()) != model.theta_dim()) {
    if (theta.empty() && model.theta_dim() > 0) {
      theta.assign(static_cast<std::size_t>(model.theta_dim()), 0.0);
    } else {
      throw ConfigError("key 'theta': wrong dimension for the model");
    }
  }
  const double fine =
      cfg.get_double("fine_step", h > 0.0 ? h / 10.0 : horizon / 10000.0);
  const std::uint64_t seed = cfg.get_seed("seed", 1);
  const std::string out = cfg.require_string("out");
  cfg.finish();

  Rng rng(derive_seed(seed, 0, 0));
  const ObservationGrid g1 = gen_poisson_grid(lambda1, horizon, rng, 1);
  const ObservationGrid g2 = gen_poisson_grid(lambda2, horizon, rng, 2);
  const NonsyncData data =
      simulate_and_sample(model, sigma, theta, g1, g2, fine, rng);
  write_observations_file(out, data);
  std::cout << "simulated " << g1.interval_count() << "+"
            << g2.interval_count() << " intervals over horizon " << horizon
            << " -> " << out << "\n";
  return 0;
}

int cmd_test_sigma(ConfigMap& cfg) {
  const ModelSpec model = model_from_config(cfg);
  const NonsyncData data = read_observations_file(cfg.require_string("data"));
  const std::vector<int> tested =
      tested_from_config(cfg, model.sigma_test_order, model.sigma_dim());
  const int blocks = cfg.get_int("blocks", 0);
  const std::vector<double> alphas = cfg.get_doubles("alpha", {0.05});
  const std::string out = cfg.get_string("out", "");
  cfg.finish();

  TestOutcome t = test_sigma(data, model, tested, blocks, alphas.front());
  std::vector<TestOutcome> rows;
  for (double a : alphas) {
    t.set_alpha(a);
    rows.push_back(t);
    print_outcome(std::cout, t);
  }
  write_outcomes(out, rows);
  return 0;
}

int cmd_test_theta(ConfigMap& cfg) {
  ModelSpec model = model_from_config(cfg);
  if (model.theta_dim() == 0) {
    throw ConfigError("theta test needs a drift family (set drift = sine)");
  }
  const NonsyncData data = read_observations_file(cfg.require_string("data"));
  const std::vector<int> tested =
      tested_from_config(cfg, model.theta_test_order, model.theta_dim());
  const int blocks = cfg.get_int("blocks", 0);
  const std::vector<double> alphas = cfg.get_doubles("alpha", {0.05});
  const std::string out = cfg.get_string("out", "");
  cfg.finish();

  const std::vector<double> sigma_hat = fit_sigma(data, model, blocks);
  std::cout << "sigma_hat = (";
  for (std::size_t i = 0; i < sigma_hat.size(); ++i) {
    std::cout << (i ? ", " : "") << sigma_hat[i];
  }
  std::cout << ")\n";
  TestOutcome t = test_theta(data, model, tested, sigma_hat, blocks,
                             alphas.front());
  std::vector<TestOutcome> rows;
  for (double a : alphas) {
    t.set_alpha(a);
    rows.push_back(t);
    print_outcome(std::cout, t);
  }
  write_outcomes(out, rows);
  return 0;
}

int cmd_test_hy(ConfigMap& cfg) {
  const ModelSpec model = model_from_config(cfg);
  if (model.diffusion_family == DiffusionFamily::SineModulated) {
    throw ConfigError(
        "the covariation test requires a time-invariant diffusion");
  }
  const NonsyncData data = read_observations_file(cfg.require_string("data"));
  const int n = cfg.require_int("n");
  const std::vector<double> alphas = cfg.get_doubles("alpha", {0.05});
  const std::string out = cfg.get_string("out", "");
  cfg.finish();

  const OverlapStructure ov = build_overlaps(data.grid1, data.grid2);
  TestOutcome t = v_n_test(data, ov, n, data.grid1.horizon(), alphas.front());
  std::vector<TestOutcome> rows;
  for (double a : alphas) {
    t.set_alpha(a);
    rows.push_back(t);
    print_outcome(std::cout, t);
  }
  write_outcomes(out, rows);
  return 0;
}

int cmd_experiment(ConfigMap& cfg) {
  ExperimentConfig ec;
  ec.model = model_from_config(cfg);
  ec.test = cfg.get_string("test", "sigma");
  resolve_sampling(cfg, ec.n, ec.h, ec.horizon);
  ec.lambda1 = cfg.require_double("lambda1");
  ec.lambda2 = cfg.require_double("lambda2");
  ec.sigma_true = cfg.require_doubles("sigma");
  ec.theta_true = cfg.get_doubles("theta", {});
  if (ec.theta_true.empty() && ec.model.theta_dim() > 0) {
    ec.theta_true.assign(static_cast<std::size_t>(ec.model.theta_dim()), 0.0);
  }
  if (ec.test != "hy") {
    const auto& order = ec.test == "theta" ? ec.model.theta_test_order
                                           : ec.model.sigma_test_order;
    const int dim =
        ec.test == "theta" ? ec.model.theta_dim() : ec.model.sigma_dim();
    ec.tested = tested_from_config(cfg, order, dim);
  }
  // Swept coordinate: defaults to the first tested coordinate (cross term
  // for the covariation test).
  int default_swept =
      ec.test == "hy" ? 2 : (ec.tested.empty() ? 0 : ec.tested.front());
  ec.swept_coord = cfg.get_int("swept", default_swept + 1) - 1;

  int sweep_sources = 0;
  if (cfg.has("true_values")) {
    ec.sweep_values = cfg.require_doubles("true_values");
    ++sweep_sources;
  }
  if (cfg.has("u_over_sqrt_n")) {
    for (double u : cfg.require_doubles("u_over_sqrt_n")) {
      ec.sweep_values.push_back(u / std::sqrt(static_cast<double>(ec.n)));
    }
    ++sweep_sources;
  }
  if (cfg.has("u_over_sqrt_nh")) {
    for (double u : cfg.require_doubles("u_over_sqrt_nh")) {
      ec.sweep_values.push_back(u / std::sqrt(ec.n * ec.h));
    }
    ++sweep_sources;
  }
  if (sweep_sources == 0) {
    throw ConfigError(
        "need one of 'true_values', 'u_over_sqrt_n', 'u_over_sqrt_nh'");
  }
  if (sweep_sources > 1) {
    throw ConfigError("give only one sweep key");
  }
  ec.block_count = cfg.get_int("blocks", 0);
  ec.alphas = cfg.get_doubles("alpha", ec.alphas);
  ec.iterations = cfg.get_int("iterations", 100);
  ec.seed = cfg.get_seed("seed", 1);
  ec.fine_step = cfg.get_double("fine_step", 0.0);
  ec.workers = cfg.get_int("workers", 0);
  ec.with_ks = cfg.get_bool("ks", false);
  const std::string out = cfg.get_string("out", "");
  cfg.finish();

  const ExperimentReport report = run_experiment(ec);
  write_report_summary(std::cout, ec, report);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw ConfigError("cannot open for writing: " + out);
    write_report_csv(os, report);
    std::cout << "report -> " << out << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"quasi-likelihood ratio tests for nonsynchronously observed "
               "two-dimensional diffusions"};
  app.require_subcommand(1);

  struct Flags {
    std::string config, out, data, seed, r, tested, alpha, workers, blocks, n;
  };

  const auto add_common = [](CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "flat key = value config file");
    sub->add_option("--out", f.out, "output CSV path");
    sub->add_option("--seed", f.seed, "master seed");
  };

  Flags fsim, fsig, fthe, fhy, fexp;
  auto* sim = app.add_subcommand("simulate", "simulate one dataset -> CSV");
  add_common(sim, fsim);
  auto* tsig = app.add_subcommand("test-sigma",
                                  "diffusion-parameter test on a dataset");
  add_common(tsig, fsig);
  tsig->add_option("--data", fsig.data, "observation CSV");
  tsig->add_option("--r", fsig.r, "number of tested coordinates");
  tsig->add_option("--tested", fsig.tested, "tested coordinates (1-based)");
  tsig->add_option("--alpha", fsig.alpha, "significance level(s)");
  tsig->add_option("--blocks", fsig.blocks, "block count (0 = auto)");
  auto* tthe = app.add_subcommand("test-theta",
                                  "drift-parameter test on a dataset");
  add_common(tthe, fthe);
  tthe->add_option("--data", fthe.data, "observation CSV");
  tthe->add_option("--r", fthe.r, "number of tested coordinates");
  tthe->add_option("--tested", fthe.tested, "tested coordinates (1-based)");
  tthe->add_option("--alpha", fthe.alpha, "significance level(s)");
  tthe->add_option("--blocks", fthe.blocks, "block count (0 = auto)");
  auto* thy = app.add_subcommand("test-hy", "zero-covariation test");
  add_common(thy, fhy);
  thy->add_option("--data", fhy.data, "observation CSV");
  thy->add_option("--n", fhy.n, "observation-count order for the scaling");
  thy->add_option("--alpha", fhy.alpha, "significance level(s)");
  auto* exp = app.add_subcommand("experiment",
                                 "replicated simulate+test experiment");
  add_common(exp, fexp);
  exp->add_option("--workers", fexp.workers, "worker threads (0 = all)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    const auto with_flags = [](const Flags& f) {
      ConfigMap cfg = f.config.empty() ? ConfigMap::from_string("")
                                       : ConfigMap::from_file(f.config);
      if (!f.out.empty()) cfg.set("out", f.out);
      if (!f.data.empty()) cfg.set("data", f.data);
      if (!f.seed.empty()) cfg.set("seed", f.seed);
      if (!f.r.empty()) cfg.set("r", f.r);
      if (!f.tested.empty()) cfg.set("tested", f.tested);
      if (!f.alpha.empty()) cfg.set("alpha", f.alpha);
      if (!f.workers.empty()) cfg.set("workers", f.workers);
      if (!f.blocks.empty()) cfg.set("blocks", f.blocks);
      if (!f.n.empty()) cfg.set("n", f.n);
      return cfg;
    };
    if (sim->parsed()) {
      ConfigMap cfg = with_flags(fsim);
      return cmd_simulate(cfg);
    }
    if (tsig->parsed()) {
      ConfigMap cfg = with_flags(fsig);
      return cmd_test_sigma(cfg);
    }
    if (tthe->parsed()) {
      ConfigMap cfg = with_flags(fthe);
      return cmd_test_theta(cfg);
    }
    if (thy->parsed()) {
      ConfigMap cfg = with_flags(fhy);
      return cmd_test_hy(cfg);
    }
    ConfigMap cfg = with_flags(fexp);
    return cmd_experiment(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qlrt
