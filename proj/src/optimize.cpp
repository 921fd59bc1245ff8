#include "qlrt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlrt/errors.hpp"

namespace qlrt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Tracker {
  std::vector<double> best_point;
  double best_value = kNegInf;
  long evals = 0;

  void offer(const std::vector<double>& x, double v) {
    if (v > best_value ||
        (v == best_value && (best_point.empty() || lex_less(x, best_point)))) {
      best_value = v;
      best_point = x;
    }
  }
};

class Workspace {
 public:
  Workspace(const OptProblem& p) : p_(p) {
    const auto d = p.box.size();
    if (p.pinned.size() > d) throw ConfigError("pinned mask longer than box");
    for (std::size_t j = 0; j < d; ++j) {
      const auto pin =
          j < p.pinned.size() ? p.pinned[j] : std::optional<double>{};
      if (pin.has_value()) {
        if (*pin < p.box[j].lo || *pin > p.box[j].hi) {
          throw ConfigError("pinned value outside its box interval");
        }
        pins_.push_back(*pin);
        is_free_.push_back(false);
      } else if (p.box[j].lo == p.box[j].hi) {
        pins_.push_back(p.box[j].lo);  // zero-width interval: nothing to move
        is_free_.push_back(false);
      } else {
        pins_.push_back(0.0);
        free_idx_.push_back(static_cast<int>(j));
        is_free_.push_back(true);
      }
    }
  }

  std::size_t dim() const { return p_.box.size(); }
  std::size_t free_dim() const { return free_idx_.size(); }

  std::vector<double> embed(const std::vector<double>& z) const {
    std::vector<double> x(pins_);
    for (std::size_t k = 0; k < free_idx_.size(); ++k) {
      const auto j = static_cast<std::size_t>(free_idx_[k]);
      x[j] = std::clamp(z[k], p_.box[j].lo, p_.box[j].hi);
    }
    return x;
  }

  std::vector<double> extract(const std::vector<double>& x) const {
    std::vector<double> z(free_idx_.size());
    for (std::size_t k = 0; k < free_idx_.size(); ++k) {
      z[k] = x[static_cast<std::size_t>(free_idx_[k])];
    }
    return z;
  }

  double eval(const std::vector<double>& z, Tracker& t) const {
    const std::vector<double> x = embed(z);
    const double v = p_.objective(x);
    ++t.evals;
    t.offer(x, v);
    return v;
  }

  double coord_width(std::size_t k) const {
    const auto j = static_cast<std::size_t>(free_idx_[k]);
    return p_.box[j].hi - p_.box[j].lo;
  }
  double coord_lo(std::size_t k) const {
    return p_.box[static_cast<std::size_t>(free_idx_[k])].lo;
  }
  double coord_hi(std::size_t k) const {
    return p_.box[static_cast<std::size_t>(free_idx_[k])].hi;
  }

 private:
  const OptProblem& p_;
  std::vector<double> pins_;
  std::vector<bool> is_free_;
  std::vector<int> free_idx_;
};

// One Nelder-Mead run over the free coordinates, maximizing.
void nelder_mead(const Workspace& ws, const std::vector<double>& z0,
                 int max_evals, double tol, Tracker& t) {
  const std::size_t n = ws.free_dim();
  if (n == 0) return;
  long used = 0;
  const auto ev = [&](const std::vector<double>& z) {
    ++used;
    return ws.eval(z, t);
  };

  std::vector<std::vector<double>> simplex;
  std::vector<double> values;
  simplex.push_back(z0);
  values.push_back(ev(z0));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> z = z0;
    double step = 0.05 * ws.coord_width(k);
    if (z[k] + step > ws.coord_hi(k)) step = -step;
    z[k] += step;
    simplex.push_back(z);
    values.push_back(ev(z));
  }

  const auto order = [&] {
    std::vector<std::size_t> idx(simplex.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (values[a] != values[b]) return values[a] > values[b];
      return lex_less(simplex[a], simplex[b]);
    });
    std::vector<std::vector<double>> s2;
    std::vector<double> v2;
    for (auto i : idx) {
      s2.push_back(simplex[i]);
      v2.push_back(values[i]);
    }
    simplex.swap(s2);
    values.swap(v2);
  };

  while (used < max_evals) {
    order();
    double diam = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        diam = std::max(diam, std::fabs(simplex[i][k] - simplex[0][k]));
      }
    }
    if (diam < tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i + 1 < simplex.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k];
    }
    for (std::size_t k = 0; k < n; ++k) centroid[k] /= static_cast<double>(n);

    const auto& worst = simplex.back();
    std::vector<double> refl(n);
    for (std::size_t k = 0; k < n; ++k) {
      refl[k] = centroid[k] + (centroid[k] - worst[k]);
    }
    const double v_refl = ev(refl);

    if (v_refl > values[0]) {
      std::vector<double> expan(n);
      for (std::size_t k = 0; k < n; ++k) {
        expan[k] = centroid[k] + 2.0 * (centroid[k] - worst[k]);
      }
      const double v_exp = ev(expan);
      if (v_exp > v_refl) {
        simplex.back() = expan;
        values.back() = v_exp;
      } else {
        simplex.back() = refl;
        values.back() = v_refl;
      }
    } else if (v_refl > values[values.size() - 2]) {
      simplex.back() = refl;
      values.back() = v_refl;
    } else {
      std::vector<double> contr(n);
      const bool outside = v_refl > values.back();
      const auto& toward = outside ? refl : worst;
      for (std::size_t k = 0; k < n; ++k) {
        contr[k] = centroid[k] + 0.5 * (toward[k] - centroid[k]);
      }
      const double v_con = ev(contr);
      if (v_con > (outside ? v_refl : values.back())) {
        simplex.back() = contr;
        values.back() = v_con;
      } else {
        for (std::size_t i = 1; i < simplex.size(); ++i) {
          for (std::size_t k = 0; k < n; ++k) {
            simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
          }
          values[i] = ev(simplex[i]);
          if (used >= max_evals) break;
        }
      }
    }
  }
}

}  // namespace

OptResult maximize(const OptProblem& problem) {
  if (!problem.objective) throw ConfigError("maximize: objective not set");
  if (problem.box.empty()) throw ConfigError("maximize: empty box");
  for (const auto& iv : problem.box) {
    if (!(iv.lo <= iv.hi)) throw ConfigError("maximize: empty box interval");
  }
  Workspace ws(problem);
  Tracker t;

  if (ws.free_dim() == 0) {
    ws.eval({}, t);
    return {t.best_point, t.best_value, t.evals};
  }

  // Coarse tensor scan, `grid_points_per_coord` points per free coordinate.
  const int gp = std::max(2, problem.grid_points_per_coord);
  const std::size_t n = ws.free_dim();
  std::vector<int> digit(n, 0);
  std::vector<std::pair<double, std::vector<double>>> scored;
  for (;;) {
    std::vector<double> z(n);
    for (std::size_t k = 0; k < n; ++k) {
      z[k] = ws.coord_lo(k) +
             ws.coord_width(k) * digit[k] / static_cast<double>(gp - 1);
    }
    scored.emplace_back(ws.eval(z, t), z);
    std::size_t k = 0;
    while (k < n && ++digit[k] == gp) {
      digit[k] = 0;
      ++k;
    }
    if (k == n) break;
  }
  if (t.best_value == kNegInf) {
    throw NumericError("maximize: no feasible point in the box");
  }

  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first > b.first;
                     return lex_less(a.second, b.second);
                   });

  std::vector<std::vector<double>> starts;
  for (const auto& s : scored) {
    if (static_cast<int>(starts.size()) >= problem.refine_starts) break;
    if (s.first == kNegInf) break;
    starts.push_back(s.second);
  }
  for (const auto& x : problem.extra_starts) {
    if (x.size() != ws.dim()) {
      throw ConfigError("maximize: extra start has wrong dimension");
    }
    const std::vector<double> clipped = ws.embed(ws.extract(x));
    starts.push_back(ws.extract(clipped));
  }

  for (const auto& z0 : starts) {
    nelder_mead(ws, z0, problem.max_evals_per_start, problem.simplex_tol, t);
  }
  return {t.best_point, t.best_value, t.evals};
}

}  // namespace qlrt
