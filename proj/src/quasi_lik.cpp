#include "qlrt/quasi_lik.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "qlrt/errors.hpp"

namespace qlrt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int block_of(double right_endpoint, double horizon, int block_count) {
  int k =
      static_cast<int>(std::ceil(right_endpoint * block_count / horizon)) - 1;
  if (k < 0) k = 0;
  if (k >= block_count) k = block_count - 1;
  return k;
}

std::vector<int> block_offsets(const ObservationGrid& grid, double horizon,
                               int block_count) {
  std::vector<int> offsets(static_cast<std::size_t>(block_count) + 1, 0);
  const int m = grid.interval_count();
  for (int i = 0; i < m; ++i) {
    ++offsets[static_cast<std::size_t>(
        block_of(grid.times[i + 1], horizon, block_count) + 1)];
  }
  for (int k = 0; k < block_count; ++k) offsets[k + 1] += offsets[k];
  return offsets;
}

}  // namespace

BlockPartition BlockPartition::make(const ObservationGrid& grid1,
                                    const ObservationGrid& grid2,
                                    int block_count) {
  if (block_count < 1) throw ConfigError("block count must be >= 1");
  if (grid1.horizon() != grid2.horizon()) {
    throw ConfigError("grids span different horizons");
  }
  BlockPartition p;
  p.block_count = block_count;
  p.horizon = grid1.horizon();
  p.offsets1 = block_offsets(grid1, p.horizon, block_count);
  p.offsets2 = block_offsets(grid2, p.horizon, block_count);
  return p;
}

int BlockPartition::auto_block_count(int m1, int m2, int target) {
  const int dense = std::max(m1, m2);
  return std::max(1, (dense + target / 2) / target);
}

DriftIncrements drift_increments(const ModelSpec& model,
                                 const std::vector<double>& theta,
                                 const ObservationGrid& grid1,
                                 const ObservationGrid& grid2) {
  DriftIncrements d;
  d.v1.resize(static_cast<std::size_t>(grid1.interval_count()));
  d.v2.resize(static_cast<std::size_t>(grid2.interval_count()));
  for (int i = 0; i < grid1.interval_count(); ++i) {
    d.v1[static_cast<std::size_t>(i)] =
        drift_integral(model, theta, grid1.times[i], grid1.times[i + 1])(0);
  }
  for (int j = 0; j < grid2.interval_count(); ++j) {
    d.v2[static_cast<std::size_t>(j)] =
        drift_integral(model, theta, grid2.times[j], grid2.times[j + 1])(1);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Evaluator internals

namespace {

struct BlockData {
  int lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;  // global interval ranges
  // overlap pairs with both members in this block; global indices, lengths
  // integrated against the diffusion weight
  std::vector<OverlapEntry> pairs;
  Eigen::VectorXd wlen1, wlen2;  // weight-integrated interval lengths
  double slog1 = 0.0, slog2 = 0.0;
  Eigen::MatrixXd cols1, cols2;  // raw data columns [dX, Vbase, V_j...]

  // fast path: svals of G and projections of the weight-scaled columns
  Eigen::ArrayXd svals;
  Eigen::MatrixXd alpha, beta;    // rank x P
  Eigen::MatrixXd gram1, gram2;   // P x P

  int m1() const { return hi1 - lo1; }
  int m2() const { return hi2 - lo2; }
};

struct SigmaScalars {
  double inv11 = 0.0, inv22 = 0.0;  // 1/C11, 1/C22
  double log11 = 0.0, log22 = 0.0;
  double rho = 0.0, inv_sq = 0.0;   // correlation, 1/sqrt(C11 C22)
  bool feasible = false;
};

// Feasibility gate shared by the fast and dense paths. Requires a relative
// determinant margin: candidates with |rho| within 1e-10 of 1 are treated as
// infeasible (the asymptotics assume a uniform lower bound on Sigma anyway),
// which keeps the two paths' feasibility verdicts identical.
bool feasible_sigma_matrix(const Eigen::Matrix2d& c) {
  return c(0, 0) > 0.0 && c(1, 1) > 0.0 &&
         c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0) >
             1e-10 * c(0, 0) * c(1, 1);
}

SigmaScalars sigma_scalars(const Eigen::Matrix2d& c) {
  SigmaScalars s;
  if (!feasible_sigma_matrix(c)) return s;
  s.inv11 = 1.0 / c(0, 0);
  s.inv22 = 1.0 / c(1, 1);
  s.log11 = std::log(c(0, 0));
  s.log22 = std::log(c(1, 1));
  s.inv_sq = 1.0 / std::sqrt(c(0, 0) * c(1, 1));
  s.rho = c(0, 1) * s.inv_sq;
  s.feasible = true;
  return s;
}

}  // namespace

struct LikelihoodEvaluator::Impl {
  ModelSpec model;
  NonsyncData data;
  BlockPartition part;
  bool fast = false;
  int ncols = 1;  // 1 (driftless) or 2 + theta_dim
  std::vector<BlockData> blocks;

  void build();
  void build_fast(BlockData& b) const;

  Eigen::VectorXd coeff_h1() const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(ncols);
    c(0) = 1.0;
    return c;
  }
  Eigen::VectorXd coeff_residual(const std::vector<double>& theta) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(ncols);
    c(0) = 1.0;
    if (ncols > 1) {
      c(1) = -1.0;
      for (std::size_t j = 0; j < theta.size(); ++j) {
        c(2 + static_cast<Eigen::Index>(j)) = -theta[j];
      }
    }
    return c;
  }

  // Sum over blocks of the quadratic form (against the c-combination of the
  // data columns) and of log det S. Either output may be skipped.
  bool accumulate(const std::vector<double>& sigma, const Eigen::VectorXd* c,
                  double* quad_out, double* logdet_out) const;

  bool accumulate_fast(const SigmaScalars& s, const Eigen::VectorXd* c,
                       double* quad_out, double* logdet_out) const;

  // Dense per-block covariance at sigma; feasible=false on failure.
  CovFactorization dense_block(const std::vector<double>& sigma,
                               const BlockData& b) const;
  Eigen::VectorXd dense_residual(const BlockData& b,
                                 const Eigen::VectorXd& c) const;
};

void LikelihoodEvaluator::Impl::build() {
  data.validate();
  const auto& g1 = data.grid1;
  const auto& g2 = data.grid2;
  const bool separable = diffusion_separable(model);
  const bool affine = drift_affine(model);
  const int d2 = model.theta_dim();
  const bool with_drift = model.drift_family != DriftFamily::None;
  // Non-affine custom drift builds residuals per call instead of columns.
  ncols = (with_drift && affine) ? 2 + d2 : 1;

  const auto measure = [&](double a, double b) {
    return separable ? diffusion_weight_integral(model, a, b) : b - a;
  };
  const std::vector<OverlapEntry> pairs = sweep_overlaps(g1, g2, measure);

  const int L = part.block_count;
  blocks.assign(static_cast<std::size_t>(L), BlockData{});
  for (int k = 0; k < L; ++k) {
    auto& b = blocks[static_cast<std::size_t>(k)];
    b.lo1 = part.offsets1[k];
    b.hi1 = part.offsets1[k + 1];
    b.lo2 = part.offsets2[k];
    b.hi2 = part.offsets2[k + 1];
    b.wlen1.resize(b.m1());
    b.wlen2.resize(b.m2());
    for (int i = 0; i < b.m1(); ++i) {
      const int gi = b.lo1 + i;
      b.wlen1(i) = measure(g1.times[gi], g1.times[gi + 1]);
      b.slog1 += std::log(b.wlen1(i));
    }
    for (int j = 0; j < b.m2(); ++j) {
      const int gj = b.lo2 + j;
      b.wlen2(j) = measure(g2.times[gj], g2.times[gj + 1]);
      b.slog2 += std::log(b.wlen2(j));
    }
    b.cols1.resize(b.m1(), ncols);
    b.cols2.resize(b.m2(), ncols);
    for (int i = 0; i < b.m1(); ++i) {
      const int gi = b.lo1 + i;
      b.cols1(i, 0) = data.increments1[static_cast<std::size_t>(gi)];
      for (int p = 1; p < ncols; ++p) {
        b.cols1(i, p) =
            drift_integral_term(model, p - 2, g1.times[gi], g1.times[gi + 1])(0);
      }
    }
    for (int j = 0; j < b.m2(); ++j) {
      const int gj = b.lo2 + j;
      b.cols2(j, 0) = data.increments2[static_cast<std::size_t>(gj)];
      for (int p = 1; p < ncols; ++p) {
        b.cols2(j, p) =
            drift_integral_term(model, p - 2, g2.times[gj], g2.times[gj + 1])(1);
      }
    }
  }

  // Overlap pairs whose members land in different blocks are dropped; the
  // blocked likelihood ignores cross-block correlation by construction.
  for (const auto& e : pairs) {
    const int k1 = block_of(g1.times[e.i + 1], part.horizon, L);
    const int k2 = block_of(g2.times[e.j + 1], part.horizon, L);
    if (k1 == k2) blocks[static_cast<std::size_t>(k1)].pairs.push_back(e);
  }

  if (fast) {
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < L; ++k) {
      build_fast(blocks[static_cast<std::size_t>(k)]);
    }
  }
}

void LikelihoodEvaluator::Impl::build_fast(BlockData& b) const {
  const int m1 = b.m1();
  const int m2 = b.m2();
  // Weight-scaled data columns Z = diag(wlen)^{-1/2} cols.
  Eigen::MatrixXd z1 = b.cols1.array().colwise() / b.wlen1.array().sqrt();
  Eigen::MatrixXd z2 = b.cols2.array().colwise() / b.wlen2.array().sqrt();
  b.gram1 = z1.transpose() * z1;
  b.gram2 = z2.transpose() * z2;
  if (m1 == 0 || m2 == 0 || b.pairs.empty()) {
    b.svals.resize(0);
    b.alpha.resize(0, ncols);
    b.beta.resize(0, ncols);
    return;
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m1, m2);
  for (const auto& e : b.pairs) {
    const int li = e.i - b.lo1;
    const int lj = e.j - b.lo2;
    g(li, lj) = e.length / std::sqrt(b.wlen1(li) * b.wlen2(lj));
  }
  // Eigen-decompose the smaller Gram side; the other side's projections
  // follow from the singular triplet relation u = G v / s (resp. v = G'u/s).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  Eigen::MatrixXd proj_small, proj_other;
  if (m1 <= m2) {
    es.compute(g * g.transpose());
    proj_small = es.eigenvectors().transpose() * z1;            // -> alpha
    proj_other = es.eigenvectors().transpose() * (g * z2);      // -> beta * s
  } else {
    es.compute(g.transpose() * g);
    proj_small = es.eigenvectors().transpose() * z2;            // -> beta
    proj_other = es.eigenvectors().transpose() * (g.transpose() * z1);
  }
  const Eigen::ArrayXd evals = es.eigenvalues().array().max(0.0);
  const Eigen::ArrayXd svals = evals.sqrt();
  const double cutoff = 1e-14 * std::max(1.0, svals.maxCoeff());
  const int n = static_cast<int>(svals.size());
  int rank = 0;
  for (int k = 0; k < n; ++k) {
    if (svals(k) > cutoff) ++rank;
  }
  b.svals.resize(rank);
  b.alpha.resize(rank, ncols);
  b.beta.resize(rank, ncols);
  int r = 0;
  for (int k = 0; k < n; ++k) {
    if (!(svals(k) > cutoff)) continue;
    b.svals(r) = svals(k);
    if (m1 <= m2) {
      b.alpha.row(r) = proj_small.row(k);
      b.beta.row(r) = proj_other.row(k) / svals(k);
    } else {
      b.beta.row(r) = proj_small.row(k);
      b.alpha.row(r) = proj_other.row(k) / svals(k);
    }
    ++r;
  }
}

bool LikelihoodEvaluator::Impl::accumulate_fast(const SigmaScalars& s,
                                                const Eigen::VectorXd* c,
                                                double* quad_out,
                                                double* logdet_out) const {
  double quad = 0.0, logdet = 0.0;
  const double rho2 = s.rho * s.rho;
  for (const auto& b : blocks) {
    const Eigen::ArrayXd d = 1.0 - rho2 * b.svals.square();
    if ((d <= 0.0).any()) return false;
    if (logdet_out != nullptr) {
      logdet += b.slog1 + b.m1() * s.log11 + b.slog2 + b.m2() * s.log22 +
                d.log().sum();
    }
    if (c != nullptr) {
      const double z1 = c->dot(b.gram1 * (*c));
      const double z2 = c->dot(b.gram2 * (*c));
      quad += s.inv11 * z1 + s.inv22 * z2;
      if (b.svals.size() > 0) {
        const Eigen::ArrayXd a = (b.alpha * (*c)).array();
        const Eigen::ArrayXd bb = (b.beta * (*c)).array();
        const Eigen::ArrayXd w = b.svals / d;
        quad += rho2 * ((a.square() * s.inv11 + bb.square() * s.inv22) *
                        b.svals * w)
                           .sum();
        quad -= 2.0 * s.rho * s.inv_sq * (a * bb * w).sum();
      }
    }
  }
  if (quad_out != nullptr) *quad_out = quad;
  if (logdet_out != nullptr) *logdet_out = logdet;
  return true;
}

CovFactorization LikelihoodEvaluator::Impl::dense_block(
    const std::vector<double>& sigma, const BlockData& b) const {
  CovFactorization f;
  const int m1 = b.m1();
  const int m2 = b.m2();
  const int m = m1 + m2;
  f.matrix = Eigen::MatrixXd::Zero(m, m);
  const bool separable = diffusion_separable(model);
  Eigen::Matrix2d c2 = Eigen::Matrix2d::Zero();
  if (separable) {
    c2 = diffusion_const_matrix(model, sigma);
    if (!feasible_sigma_matrix(c2)) return f;  // infeasible
    for (int i = 0; i < m1; ++i) f.matrix(i, i) = c2(0, 0) * b.wlen1(i);
    for (int j = 0; j < m2; ++j) {
      f.matrix(m1 + j, m1 + j) = c2(1, 1) * b.wlen2(j);
    }
    for (const auto& e : b.pairs) {
      const int li = e.i - b.lo1;
      const int lj = e.j - b.lo2;
      f.matrix(li, m1 + lj) = c2(0, 1) * e.length;
      f.matrix(m1 + lj, li) = f.matrix(li, m1 + lj);
    }
  } else {
    const auto& g1 = data.grid1;
    const auto& g2 = data.grid2;
    for (int i = 0; i < m1; ++i) {
      const int gi = b.lo1 + i;
      f.matrix(i, i) =
          sigma_integral(model, sigma, g1.times[gi], g1.times[gi + 1])(0, 0);
    }
    for (int j = 0; j < m2; ++j) {
      const int gj = b.lo2 + j;
      f.matrix(m1 + j, m1 + j) =
          sigma_integral(model, sigma, g2.times[gj], g2.times[gj + 1])(1, 1);
    }
    for (const auto& e : b.pairs) {
      const int li = e.i - b.lo1;
      const int lj = e.j - b.lo2;
      const double lo = std::max(g1.times[e.i], g2.times[e.j]);
      const double hi = std::min(g1.times[e.i + 1], g2.times[e.j + 1]);
      const double v = sigma_integral(model, sigma, lo, hi)(0, 1);
      f.matrix(li, m1 + lj) = v;
      f.matrix(m1 + lj, li) = v;
    }
  }
  if (m == 0) {
    f.positive_definite = true;
    f.log_det = 0.0;
    return f;
  }
  f.llt.compute(f.matrix);
  if (f.llt.info() != Eigen::Success) return f;
  const auto diag = f.llt.matrixLLT().diagonal();
  if ((diag.array() <= 0.0).any()) return f;
  f.log_det = 2.0 * diag.array().log().sum();
  f.positive_definite = true;
  return f;
}

Eigen::VectorXd LikelihoodEvaluator::Impl::dense_residual(
    const BlockData& b, const Eigen::VectorXd& c) const {
  Eigen::VectorXd y(b.m1() + b.m2());
  y.head(b.m1()) = b.cols1 * c;
  y.tail(b.m2()) = b.cols2 * c;
  return y;
}

bool LikelihoodEvaluator::Impl::accumulate(const std::vector<double>& sigma,
                                           const Eigen::VectorXd* c,
                                           double* quad_out,
                                           double* logdet_out) const {
  if (static_cast<int>(sigma.size()) != model.sigma_dim()) {
    throw ConfigError("sigma has wrong dimension");
  }
  if (fast) {
    const SigmaScalars s = sigma_scalars(diffusion_const_matrix(model, sigma));
    if (!s.feasible) return false;
    return accumulate_fast(s, c, quad_out, logdet_out);
  }
  double quad = 0.0, logdet = 0.0;
  for (const auto& b : blocks) {
    if (b.m1() + b.m2() == 0) continue;
    const CovFactorization f = dense_block(sigma, b);
    if (!f.positive_definite) return false;
    logdet += f.log_det;
    if (c != nullptr) {
      const Eigen::VectorXd y = dense_residual(b, *c);
      quad += y.dot(f.llt.solve(y));
    }
  }
  if (quad_out != nullptr) *quad_out = quad;
  if (logdet_out != nullptr) *logdet_out = logdet;
  return true;
}

// ---------------------------------------------------------------------------
// Evaluator surface

LikelihoodEvaluator::LikelihoodEvaluator(const ModelSpec& model,
                                         const NonsyncData& data,
                                         int block_count, Mode mode)
    : impl_(std::make_unique<Impl>()) {
  impl_->model = model;
  impl_->data = data;
  if (block_count <= 0) {
    block_count = BlockPartition::auto_block_count(
        data.grid1.interval_count(), data.grid2.interval_count());
  }
  impl_->part = BlockPartition::make(data.grid1, data.grid2, block_count);
  const bool eligible =
      diffusion_separable(model) && drift_affine(model);
  switch (mode) {
    case Mode::Auto:
      impl_->fast = eligible;
      break;
    case Mode::Dense:
      impl_->fast = false;
      break;
    case Mode::Fast:
      if (!eligible) {
        throw ConfigError(
            "fast likelihood path requires separable diffusion and affine "
            "drift");
      }
      impl_->fast = true;
      break;
  }
  impl_->build();
}

LikelihoodEvaluator::~LikelihoodEvaluator() = default;
LikelihoodEvaluator::LikelihoodEvaluator(LikelihoodEvaluator&&) noexcept =
    default;
LikelihoodEvaluator& LikelihoodEvaluator::operator=(
    LikelihoodEvaluator&&) noexcept = default;

int LikelihoodEvaluator::block_count() const { return impl_->part.block_count; }
bool LikelihoodEvaluator::fast_path() const { return impl_->fast; }
const ModelSpec& LikelihoodEvaluator::model() const { return impl_->model; }

double LikelihoodEvaluator::h1(const std::vector<double>& sigma) const {
  const Eigen::VectorXd c = impl_->coeff_h1();
  double quad = 0.0, logdet = 0.0;
  if (!impl_->accumulate(sigma, &c, &quad, &logdet)) return kNegInf;
  return -0.5 * quad - 0.5 * logdet;
}

double LikelihoodEvaluator::joint(const std::vector<double>& sigma,
                                  const std::vector<double>& theta) const {
  if (static_cast<int>(theta.size()) != impl_->model.theta_dim()) {
    throw ConfigError("theta has wrong dimension");
  }
  double quad = 0.0, logdet = 0.0;
  if (impl_->ncols > 1 || impl_->model.drift_family == DriftFamily::None) {
    const Eigen::VectorXd c = impl_->coeff_residual(theta);
    if (!impl_->accumulate(sigma, &c, &quad, &logdet)) return kNegInf;
    return -0.5 * quad - 0.5 * logdet;
  }
  // Non-affine custom drift: dense blocks with explicit residuals.
  for (const auto& b : impl_->blocks) {
    if (b.m1() + b.m2() == 0) continue;
    const CovFactorization f = impl_->dense_block(sigma, b);
    if (!f.positive_definite) return kNegInf;
    Eigen::VectorXd y(b.m1() + b.m2());
    const auto& g1 = impl_->data.grid1;
    const auto& g2 = impl_->data.grid2;
    for (int i = 0; i < b.m1(); ++i) {
      const int gi = b.lo1 + i;
      y(i) = b.cols1(i, 0) -
             drift_integral(impl_->model, theta, g1.times[gi],
                            g1.times[gi + 1])(0);
    }
    for (int j = 0; j < b.m2(); ++j) {
      const int gj = b.lo2 + j;
      y(b.m1() + j) = b.cols2(j, 0) -
                      drift_integral(impl_->model, theta, g2.times[gj],
                                     g2.times[gj + 1])(1);
    }
    quad += y.dot(f.llt.solve(y));
    logdet += f.log_det;
  }
  return -0.5 * quad - 0.5 * logdet;
}

double LikelihoodEvaluator::log_det(const std::vector<double>& sigma) const {
  double logdet = 0.0;
  if (!impl_->accumulate(sigma, nullptr, nullptr, &logdet)) return kNegInf;
  return logdet;
}

// ----- H2 context -----

struct LikelihoodEvaluator::H2Context::Impl {
  const LikelihoodEvaluator::Impl* owner = nullptr;
  bool fast = false;
  SigmaScalars scal;
  // dense mode: cached factorizations at sigma_hat
  std::vector<CovFactorization> factors;
  std::vector<double> sigma_hat;
};

LikelihoodEvaluator::H2Context::H2Context() : impl_(std::make_unique<Impl>()) {}
LikelihoodEvaluator::H2Context::~H2Context() = default;
LikelihoodEvaluator::H2Context::H2Context(H2Context&&) noexcept = default;

LikelihoodEvaluator::H2Context LikelihoodEvaluator::make_h2_context(
    const std::vector<double>& sigma_hat) const {
  H2Context ctx;
  ctx.impl_->owner = impl_.get();
  ctx.impl_->fast = impl_->fast;
  ctx.impl_->sigma_hat = sigma_hat;
  if (impl_->fast) {
    ctx.impl_->scal =
        sigma_scalars(diffusion_const_matrix(impl_->model, sigma_hat));
    if (!ctx.impl_->scal.feasible) {
      throw NumericError("h2: sigma_hat is infeasible");
    }
  } else {
    ctx.impl_->factors.reserve(impl_->blocks.size());
    for (const auto& b : impl_->blocks) {
      ctx.impl_->factors.push_back(impl_->dense_block(sigma_hat, b));
      if (b.m1() + b.m2() > 0 && !ctx.impl_->factors.back().positive_definite) {
        throw NumericError("h2: sigma_hat is infeasible");
      }
    }
  }
  return ctx;
}

double LikelihoodEvaluator::H2Context::operator()(
    const std::vector<double>& theta) const {
  const auto* ev = impl_->owner;
  if (static_cast<int>(theta.size()) != ev->model.theta_dim()) {
    throw ConfigError("theta has wrong dimension");
  }
  if (impl_->fast) {
    const Eigen::VectorXd c = ev->coeff_residual(theta);
    double quad = 0.0;
    if (!ev->accumulate_fast(impl_->scal, &c, &quad, nullptr)) {
      return kNegInf;
    }
    return -0.5 * quad;
  }
  double quad = 0.0;
  if (ev->ncols > 1 || ev->model.drift_family == DriftFamily::None) {
    const Eigen::VectorXd c = ev->coeff_residual(theta);
    for (std::size_t k = 0; k < ev->blocks.size(); ++k) {
      const auto& b = ev->blocks[k];
      if (b.m1() + b.m2() == 0) continue;
      const Eigen::VectorXd y = ev->dense_residual(b, c);
      quad += y.dot(impl_->factors[k].llt.solve(y));
    }
    return -0.5 * quad;
  }
  for (std::size_t k = 0; k < ev->blocks.size(); ++k) {
    const auto& b = ev->blocks[k];
    if (b.m1() + b.m2() == 0) continue;
    Eigen::VectorXd y(b.m1() + b.m2());
    for (int i = 0; i < b.m1(); ++i) {
      const int gi = b.lo1 + i;
      y(i) = b.cols1(i, 0) -
             drift_integral(ev->model, theta, ev->data.grid1.times[gi],
                            ev->data.grid1.times[gi + 1])(0);
    }
    for (int j = 0; j < b.m2(); ++j) {
      const int gj = b.lo2 + j;
      y(b.m1() + j) = b.cols2(j, 0) -
                      drift_integral(ev->model, theta,
                                     ev->data.grid2.times[gj],
                                     ev->data.grid2.times[gj + 1])(1);
    }
    quad += y.dot(impl_->factors[k].llt.solve(y));
  }
  return -0.5 * quad;
}

// ---------------------------------------------------------------------------
// One-shot wrappers and the unblocked assembly

CovFactorization assemble_S(const ModelSpec& model,
                            const std::vector<double>& sigma,
                            const ObservationGrid& grid1,
                            const ObservationGrid& grid2) {
  NonsyncData data;
  data.grid1 = grid1;
  data.grid2 = grid2;
  data.values1.assign(grid1.times.size(), 0.0);
  data.values2.assign(grid2.times.size(), 0.0);
  data.rebuild_increments();
  LikelihoodEvaluator ev(model, data, 1, LikelihoodEvaluator::Mode::Dense);
  return ev.impl_->dense_block(sigma, ev.impl_->blocks.front());
}

double h1(const NonsyncData& data, const ModelSpec& model,
          const std::vector<double>& sigma, int block_count) {
  return LikelihoodEvaluator(model, data, block_count).h1(sigma);
}

double h2(const NonsyncData& data, const ModelSpec& model,
          const std::vector<double>& theta,
          const std::vector<double>& sigma_hat, int block_count) {
  LikelihoodEvaluator ev(model, data, block_count);
  return ev.make_h2_context(sigma_hat)(theta);
}

double joint_h(const NonsyncData& data, const ModelSpec& model,
               const std::vector<double>& sigma,
               const std::vector<double>& theta, int block_count) {
  return LikelihoodEvaluator(model, data, block_count).joint(sigma, theta);
}

}  // namespace qlrt
