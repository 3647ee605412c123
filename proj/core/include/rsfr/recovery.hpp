#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsfr/observation_matrix.hpp"

namespace rsfr::recovery {

struct SolverConfig {
  /// Regularization weight for (Block-)Lasso. When unset, defaults to
  /// 0.1 * max entry magnitude of Psi^H y (entrywise) or 0.1 * max block
  /// norm of Psi^H y (blockwise).
  std::optional<double> lambda;
  int max_iterations = 5000;
  /// Relative objective-change stop for the proximal solvers; relative
  /// feasibility gap ||Psi x - y|| / ||y|| for basis pursuit.
  double tolerance = 1e-8;
  /// Magnitude cutoff identifying the support of a solver estimate.
  double support_threshold = 1e-5;
  /// Penalty parameter of the alternating-direction basis pursuit scheme.
  double admm_penalty = 1.0;

  void validate() const;
};

struct RecoveryResult {
  Eigen::VectorXcd estimate;
  std::vector<int> support;        ///< entry indices, ascending
  std::vector<int> block_support;  ///< { floor(i / M) : i in support }
  Eigen::VectorXd velocity_spectrum;  ///< per-block norm of the estimate
  int iterations = 0;
  double residual_norm = 0.0;  ///< ||y - Psi * estimate||
  bool converged = true;
  std::string diagnostic;
};

/// Correlation reconstruction x = Psi^H y. The baseline display: support
/// is left empty rather than thresholded.
RecoveryResult matched_filter(const ObservationMatrix& matrix,
                              const Eigen::VectorXcd& y);

/// Greedy entrywise pursuit: `sparsity` rounds of picking the column most
/// correlated with the residual, re-fitting least squares on everything
/// selected, and updating the residual. Ties go to the lowest index.
/// Throws std::runtime_error if the selected columns lose full rank.
RecoveryResult omp(const ObservationMatrix& matrix, const Eigen::VectorXcd& y,
                   int sparsity);

/// Blockwise greedy pursuit: each round picks the velocity block with the
/// largest correlation energy ||Psi_q^H r||_2 and re-fits jointly on all
/// selected blocks. support covers every entry of the selected blocks.
RecoveryResult block_omp(const ObservationMatrix& matrix,
                         const Eigen::VectorXcd& y, int block_sparsity);

/// Accelerated proximal-gradient minimization of
///   0.5*||y - Psi x||^2 + lambda*||x||_1
/// with step 1/||Psi||_s^2 and magnitude soft-thresholding (phase is
/// preserved). Momentum restarts whenever the objective would rise, so
/// the recorded objective sequence is nonincreasing.
RecoveryResult lasso_solve(const ObservationMatrix& matrix,
                           const Eigen::VectorXcd& y,
                           const SolverConfig& config = {});

/// Same scheme for the mixed-norm objective
///   0.5*||y - Psi x||^2 + lambda*sum_q ||x_q||_2
/// with blockwise shrinkage x_q * max(0, 1 - t/||x_q||_2).
RecoveryResult block_lasso_solve(const ObservationMatrix& matrix,
                                 const Eigen::VectorXcd& y,
                                 const SolverConfig& config = {});

/// Equality-constrained sparse recovery, min ||x||_1 (or sum of block
/// norms when blockwise) subject to Psi x = y, by an alternating-direction
/// scheme that alternates projection onto the constraint with shrinkage.
/// Non-convergence returns the partial result with converged == false.
RecoveryResult basis_pursuit_solve(const ObservationMatrix& matrix,
                                   const Eigen::VectorXcd& y,
                                   const SolverConfig& config = {},
                                   bool blockwise = false);

/// Indices of the `count` largest magnitudes, ties to the lowest index;
/// returned ascending.
std::vector<int> extract_support_topk(const Eigen::VectorXcd& estimate,
                                      int count);

/// Minimum-norm least-squares re-fit of y on the support columns, zero
/// elsewhere. A rank-deficient support falls back to the pseudo-inverse
/// solution and reports it through rank_deficient.
Eigen::VectorXcd debias_least_squares(const ObservationMatrix& matrix,
                                      const Eigen::VectorXcd& y,
                                      std::span<const int> support,
                                      bool* rank_deficient = nullptr);

/// Per-block Euclidean norms; the velocity profile of an estimate.
/// Throws std::invalid_argument if the length is not divisible by
/// block_size.
Eigen::VectorXd velocity_spectrum(const Eigen::VectorXcd& estimate,
                                  int block_size);

}  // namespace rsfr::recovery
