#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qlrt/lrt.hpp"
#include "qlrt/model.hpp"

namespace qlrt {

// A replicated simulate-and-test experiment: one row of results per
// (true value of the swept coordinate, significance level).
struct ExperimentConfig {
  ModelSpec model;
  std::string test = "sigma";  // "sigma" | "theta" | "hy"

  int n = 0;            // nominal observation-count order (sqrt(n) scalings)
  double h = 0.0;       // nominal interval-length order
  double horizon = 0.0; // n * h
  double lambda1 = 0.0, lambda2 = 0.0;

  std::vector<double> sigma_true, theta_true;
  std::vector<double> sweep_values;  // resolved values of the swept coordinate
  int swept_coord = -1;              // into sigma (sigma/hy) or theta (theta)
  std::vector<int> tested;           // coordinates pinned to 0 under the null

  int block_count = 0;  // 0 = automatic
  std::vector<double> alphas{0.10, 0.05, 0.01};
  int iterations = 100;
  std::uint64_t seed = 1;
  double fine_step = 0.0;  // 0 = h/10
  int workers = 0;         // 0 = all hardware threads
  bool with_ks = false;    // KS of the statistic sample against chi2(r)

  void validate() const;  // throws ConfigError
};

struct ExperimentReport {
  struct Row {
    std::string true_value;
    double alpha = 0.0;
    double rejection_rate = 0.0;  // exact count / iterations
    int iterations = 0;
    int failures = 0;
  };
  struct KsRow {
    std::string true_value;
    double d = 0.0, p = 0.0;
  };
  std::vector<Row> rows;
  std::vector<KsRow> ks;
  // statistic samples per sweep value (successful replications only)
  std::vector<std::vector<double>> samples;
};

// Runs all replications; each replication draws its randomness from
// (seed, sweep index, replication index), so the report is byte-identical
// for any worker count. More than 1% failed replications aborts.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Report CSV: header `true_value,alpha,rejection_rate,iterations,failures`.
void write_report_csv(std::ostream& os, const ExperimentReport& report);
std::string report_csv_string(const ExperimentReport& report);
void write_report_summary(std::ostream& os, const ExperimentConfig& config,
                          const ExperimentReport& report);

}  // namespace qlrt
