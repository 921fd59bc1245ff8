#include "qlrt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qlrt/errors.hpp"

namespace qlrt {

void NonsyncData::rebuild_increments() {
  increments1.assign(values1.size() > 0 ? values1.size() - 1 : 0, 0.0);
  increments2.assign(values2.size() > 0 ? values2.size() - 1 : 0, 0.0);
  for (std::size_t i = 1; i < values1.size(); ++i) {
    increments1[i - 1] = values1[i] - values1[i - 1];
  }
  for (std::size_t j = 1; j < values2.size(); ++j) {
    increments2[j - 1] = values2[j] - values2[j - 1];
  }
}

void NonsyncData::validate() const {
  grid1.validate();
  grid2.validate();
  if (grid1.horizon() != grid2.horizon()) {
    throw ConfigError("observation grids span different horizons");
  }
  if (values1.size() != grid1.times.size() ||
      values2.size() != grid2.times.size()) {
    throw ConfigError("value vectors do not match grid sizes");
  }
}

NonsyncData simulate_and_sample(const ModelSpec& model,
                                const std::vector<double>& sigma,
                                const std::vector<double>& theta,
                                const ObservationGrid& grid1,
                                const ObservationGrid& grid2, double fine_step,
                                Rng& rng) {
  if (!(fine_step > 0.0)) throw ConfigError("fine_step must be positive");
  if (grid1.horizon() != grid2.horizon()) {
    throw ConfigError("grids span different horizons");
  }
  if (diffusion_separable(model) &&
      !spd2x2(diffusion_const_matrix(model, sigma))) {
    throw NumericError("simulate: diffusion matrix is not positive definite");
  }
  const double horizon = grid1.horizon();

  // Union time grid: uniform fine partition plus every observation time, so
  // sampled values are exact at observation times rather than snapped.
  std::vector<double> times;
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / fine_step));
  times.reserve(steps + grid1.times.size() + grid2.times.size());
  for (std::size_t k = 0; k * fine_step < horizon; ++k) {
    times.push_back(static_cast<double>(k) * fine_step);
  }
  times.push_back(horizon);
  times.insert(times.end(), grid1.times.begin(), grid1.times.end());
  times.insert(times.end(), grid2.times.begin(), grid2.times.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  NonsyncData out;
  out.grid1 = grid1;
  out.grid2 = grid2;
  out.values1.reserve(grid1.times.size());
  out.values2.reserve(grid2.times.size());

  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  std::size_t next1 = 0, next2 = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (next1 < grid1.times.size() && grid1.times[next1] == t) {
      out.values1.push_back(x(0));
      ++next1;
    }
    if (next2 < grid2.times.size() && grid2.times[next2] == t) {
      out.values2.push_back(x(1));
      ++next2;
    }
    if (k + 1 == times.size()) break;
    const double dt = times[k + 1] - t;
    const Eigen::Vector2d mu = eval_drift(model, theta, t);
    const Eigen::Matrix2d b = eval_diffusion(model, sigma, t);
    const double sq = std::sqrt(dt);
    const Eigen::Vector2d dw{sq * rng.normal(), sq * rng.normal()};
    x += mu * dt + b * dw;
  }
  if (next1 != grid1.times.size() || next2 != grid2.times.size()) {
    throw NumericError("simulate: missed observation times on the union grid");
  }
  out.rebuild_increments();
  return out;
}

namespace {

void append_rows(std::ostream& os, const ObservationGrid& g,
                 const std::vector<double>& v) {
  char buf[128];
  for (std::size_t k = 0; k < g.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", g.component, g.times[k],
                  v[k]);
    os << buf;
  }
}

}  // namespace

void write_observations_csv(std::ostream& os, const NonsyncData& data) {
  os << "component,time,value\n";
  append_rows(os, data.grid1, data.values1);
  append_rows(os, data.grid2, data.values2);
}

NonsyncData read_observations_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "component,time,value") {
    throw ConfigError("observation CSV: bad or missing header");
  }
  NonsyncData data;
  data.grid1.component = 1;
  data.grid2.component = 2;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    int comp = 0;
    double t = 0.0, v = 0.0;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf", &comp, &t, &v) != 3 ||
        (comp != 1 && comp != 2)) {
      throw ConfigError("observation CSV: malformed row at line " +
                        std::to_string(lineno));
    }
    if (comp == 1) {
      data.grid1.times.push_back(t);
      data.values1.push_back(v);
    } else {
      data.grid2.times.push_back(t);
      data.values2.push_back(v);
    }
  }
  data.rebuild_increments();
  data.validate();
  return data;
}

void write_observations_file(const std::string& path, const NonsyncData& data) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  write_observations_csv(os, data);
}

NonsyncData read_observations_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open observation CSV: " + path);
  return read_observations_csv(is);
}

}  // namespace qlrt
