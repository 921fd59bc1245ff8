#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <memory>
#include <vector>

#include "qlrt/grid.hpp"
#include "qlrt/model.hpp"
#include "qlrt/simulate.hpp"

namespace qlrt {

// Equal-length partition of (0, horizon] into block_count blocks. Each
// interval of each component is assigned to the block containing its right
// endpoint, so per-component assignments are contiguous index ranges.
struct BlockPartition {
  int block_count = 1;
  double horizon = 0.0;
  std::vector<int> offsets1, offsets2;  // size block_count+1

  static BlockPartition make(const ObservationGrid& grid1,
                             const ObservationGrid& grid2, int block_count);
  // Default block count: about `target` intervals of the denser component
  // per block.
  static int auto_block_count(int m1, int m2, int target = 250);
};

// Dense assembled covariance of the stacked increment vector, with its
// Cholesky factorization and log-determinant.
struct CovFactorization {
  Eigen::MatrixXd matrix;
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_det = 0.0;
  bool positive_definite = false;
};

// Unblocked S(sigma) for a full dataset; the per-block variant lives inside
// LikelihoodEvaluator. Returns positive_definite=false (with no
// factorization) for infeasible sigma.
CovFactorization assemble_S(const ModelSpec& model,
                            const std::vector<double>& sigma,
                            const ObservationGrid& grid1,
                            const ObservationGrid& grid2);

// Per-interval drift integrals for both components.
struct DriftIncrements {
  std::vector<double> v1, v2;
};
DriftIncrements drift_increments(const ModelSpec& model,
                                 const std::vector<double>& theta,
                                 const ObservationGrid& grid1,
                                 const ObservationGrid& grid2);

// Evaluates the quasi-log-likelihoods over a block partition.
//
// Fast mode (separable diffusion only) writes each block covariance as
// S = D^{1/2} (I + rho J) D^{1/2} with J = [[0, G], [G^T, 0]] built from
// weight-integrated interval lengths. The singular values of G and the
// projections of the data onto the singular vectors are computed once per
// dataset; every candidate sigma afterwards costs O(rank) per block for both
// the quadratic form and the log-determinant. Dense mode assembles and
// factorizes S per candidate and serves as the reference implementation.
class LikelihoodEvaluator {
 public:
  enum class Mode { Auto, Dense, Fast };

  LikelihoodEvaluator(const ModelSpec& model, const NonsyncData& data,
                      int block_count = 0, Mode mode = Mode::Auto);
  ~LikelihoodEvaluator();
  LikelihoodEvaluator(LikelihoodEvaluator&&) noexcept;
  LikelihoodEvaluator& operator=(LikelihoodEvaluator&&) noexcept;

  int block_count() const;
  bool fast_path() const;
  const ModelSpec& model() const;

  // -1/2 dX' S^-1 dX - 1/2 log det S, summed over blocks. Returns -inf for
  // infeasible sigma so optimizers can reject the point.
  double h1(const std::vector<double>& sigma) const;

  // Joint objective: -1/2 res(theta)' S(sigma)^-1 res(theta) - 1/2 log det
  // S(sigma), with res(theta) = dX - dV(theta).
  double joint(const std::vector<double>& sigma,
               const std::vector<double>& theta) const;

  // Sum over blocks of log det S(sigma); -inf when infeasible.
  double log_det(const std::vector<double>& sigma) const;

  // Drift-stage likelihood: S is fixed at sigma_hat once, then evaluated for
  // many theta.
  class H2Context {
   public:
    double operator()(const std::vector<double>& theta) const;
    ~H2Context();
    H2Context(H2Context&&) noexcept;

   private:
    friend class LikelihoodEvaluator;
    H2Context();
    struct Impl;
    std::unique_ptr<Impl> impl_;
  };
  H2Context make_h2_context(const std::vector<double>& sigma_hat) const;

 private:
  friend CovFactorization assemble_S(const ModelSpec&,
                                     const std::vector<double>&,
                                     const ObservationGrid&,
                                     const ObservationGrid&);
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience wrappers matching the one-shot operation surface. block_count
// of 0 selects the automatic choice; 1 gives the unblocked definitions.
double h1(const NonsyncData& data, const ModelSpec& model,
          const std::vector<double>& sigma, int block_count = 1);
double h2(const NonsyncData& data, const ModelSpec& model,
          const std::vector<double>& theta,
          const std::vector<double>& sigma_hat, int block_count = 1);
double joint_h(const NonsyncData& data, const ModelSpec& model,
               const std::vector<double>& sigma,
               const std::vector<double>& theta, int block_count = 1);

}  // namespace qlrt
