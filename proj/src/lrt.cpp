#include "qlrt/lrt.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "qlrt/errors.hpp"
#include "qlrt/optimize.hpp"

namespace qlrt {

namespace {

bool near_boundary(const std::vector<double>& x, const Box& box,
                   const std::vector<std::optional<double>>& pinned) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j < pinned.size() && pinned[j].has_value()) continue;
    const double width = box[j].hi - box[j].lo;
    const double tol = 1e-9 * std::max(1.0, width);
    if (x[j] - box[j].lo < tol || box[j].hi - x[j] < tol) return true;
  }
  return false;
}

std::vector<std::optional<double>> pin_zero(std::size_t dim,
                                            const std::vector<int>& coords) {
  std::vector<std::optional<double>> pins(dim);
  for (int c : coords) {
    if (c < 0 || static_cast<std::size_t>(c) >= dim) {
      throw ConfigError("tested coordinate out of range");
    }
    pins[static_cast<std::size_t>(c)] = 0.0;
  }
  return pins;
}

// Pinned fit first, then the full fit seeded with the null argmax (as well
// as the grid ranking), so max_full >= max_null holds by construction.
struct RatioFit {
  OptResult null_fit, full_fit;
  double statistic = 0.0;
};

RatioFit likelihood_ratio(
    const std::function<double(const std::vector<double>&)>& objective,
    const Box& box, const std::vector<int>& tested_coords) {
  OptProblem null_p;
  null_p.objective = objective;
  null_p.box = box;
  null_p.pinned = pin_zero(box.size(), tested_coords);
  RatioFit fit;
  fit.null_fit = maximize(null_p);

  OptProblem full_p;
  full_p.objective = objective;
  full_p.box = box;
  full_p.extra_starts = {fit.null_fit.argmax};
  fit.full_fit = maximize(full_p);

  const double gap = fit.null_fit.value - fit.full_fit.value;
  if (gap > 1e-6) {
    throw NumericError("constrained maximum exceeds unconstrained maximum");
  }
  fit.statistic = std::max(0.0, 2.0 * (fit.full_fit.value - fit.null_fit.value));
  return fit;
}

TestOutcome make_outcome(const std::string& name, const RatioFit& fit, int df,
                         double alpha, const Box& box) {
  TestOutcome out;
  out.test = name;
  out.statistic = fit.statistic;
  out.df = df;
  out.alpha = alpha;
  out.p_value = chi2_sf(fit.statistic, df);
  out.reject = out.p_value <= alpha;
  out.argmax_full = fit.full_fit.argmax;
  out.argmax_null = fit.null_fit.argmax;
  out.boundary_hit = near_boundary(fit.full_fit.argmax, box, {}) ||
                     near_boundary(fit.null_fit.argmax, box, {});
  return out;
}

}  // namespace

void TestOutcome::set_alpha(double a) {
  alpha = a;
  reject = p_value <= a;
}

std::vector<int> first_coords(const std::vector<int>& order, int r) {
  if (r < 1 || static_cast<std::size_t>(r) > order.size()) {
    throw ConfigError("tested coordinate count out of range");
  }
  return {order.begin(), order.begin() + r};
}

TestOutcome test_sigma(const NonsyncData& data, const ModelSpec& model,
                       const std::vector<int>& tested_coords, int block_count,
                       double alpha) {
  if (tested_coords.empty()) throw ConfigError("no tested coordinates");
  LikelihoodEvaluator ev(model, data, block_count);
  const auto fit = likelihood_ratio(
      [&](const std::vector<double>& s) { return ev.h1(s); }, model.sigma_box,
      tested_coords);
  return make_outcome("sigma", fit, static_cast<int>(tested_coords.size()),
                      alpha, model.sigma_box);
}

std::vector<double> fit_sigma(const NonsyncData& data, const ModelSpec& model,
                              int block_count) {
  LikelihoodEvaluator ev(model, data, block_count);
  OptProblem p;
  p.objective = [&](const std::vector<double>& s) { return ev.h1(s); };
  p.box = model.sigma_box;
  return maximize(p).argmax;
}

TestOutcome test_theta(const NonsyncData& data, const ModelSpec& model,
                       const std::vector<int>& tested_coords,
                       const std::vector<double>& sigma_hat, int block_count,
                       double alpha) {
  if (tested_coords.empty()) throw ConfigError("no tested coordinates");
  if (model.theta_dim() < 1) {
    throw ConfigError("model has no drift parameter to test");
  }
  LikelihoodEvaluator ev(model, data, block_count);
  const auto ctx = ev.make_h2_context(sigma_hat);
  const auto fit = likelihood_ratio(
      [&](const std::vector<double>& t) { return ctx(t); }, model.theta_box,
      tested_coords);
  return make_outcome("theta", fit, static_cast<int>(tested_coords.size()),
                      alpha, model.theta_box);
}

TestOutcome lr_joint(const NonsyncData& data, const ModelSpec& model,
                     const std::vector<int>& tested_coords, JointBranch branch,
                     const std::vector<double>& true_other, int block_count,
                     double alpha) {
  if (tested_coords.empty()) throw ConfigError("no tested coordinates");
  LikelihoodEvaluator ev(model, data, block_count);
  if (branch == JointBranch::Sigma) {
    const auto fit = likelihood_ratio(
        [&](const std::vector<double>& s) { return ev.joint(s, true_other); },
        model.sigma_box, tested_coords);
    return make_outcome("lr1", fit, static_cast<int>(tested_coords.size()),
                        alpha, model.sigma_box);
  }
  const auto fit = likelihood_ratio(
      [&](const std::vector<double>& t) { return ev.joint(true_other, t); },
      model.theta_box, tested_coords);
  return make_outcome("lr2", fit, static_cast<int>(tested_coords.size()),
                      alpha, model.theta_box);
}

void write_outcome_csv(std::ostream& os, const std::vector<TestOutcome>& rows) {
  os << "test,statistic,df,p_value,alpha,reject\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%.17g,%.17g,%s\n",
                  r.test.c_str(), r.statistic, r.df, r.p_value, r.alpha,
                  r.reject ? "true" : "false");
    os << buf;
  }
}

}  // namespace qlrt
