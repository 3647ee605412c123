#include "rsfr/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rsfr/spectral.hpp"

namespace rsfr::recovery {

namespace {

// Magnitudes via sqrt(squaredNorm) everywhere so that blockwise code with
// block size 1 reproduces the entrywise code bit for bit.
double block_norm(const Eigen::Ref<const Eigen::VectorXcd>& v) {
  return std::sqrt(v.squaredNorm());
}

double mixed_norm(const Eigen::VectorXcd& v, int block) {
  double total = 0.0;
  for (Eigen::Index q = 0; q * block < v.size(); ++q)
    total += block_norm(v.segment(q * block, block));
  return total;
}

double max_block_norm(const Eigen::VectorXcd& v, int block) {
  double best = 0.0;
  for (Eigen::Index q = 0; q * block < v.size(); ++q)
    best = std::max(best, block_norm(v.segment(q * block, block)));
  return best;
}

// x_q <- x_q * max(0, 1 - t / ||x_q||); kills a block outright when its
// norm is at or below the threshold, preserving phase otherwise
void shrink_blocks(Eigen::VectorXcd& v, double t, int block) {
  for (Eigen::Index q = 0; q * block < v.size(); ++q) {
    auto seg = v.segment(q * block, block);
    const double nrm = block_norm(seg);
    if (nrm <= t)
      seg.setZero();
    else
      seg *= 1.0 - t / nrm;
  }
}

std::vector<int> blocks_of(const std::vector<int>& support, int block) {
  std::vector<int> out;
  for (int i : support) {
    const int q = i / block;
    if (out.empty() || out.back() != q) out.push_back(q);
  }
  return out;
}

RecoveryResult finalize(const ObservationMatrix& matrix,
                        const Eigen::VectorXcd& y, Eigen::VectorXcd estimate,
                        std::vector<int> support, int iterations,
                        bool converged, std::string diagnostic) {
  RecoveryResult result;
  result.residual_norm = (y - matrix.entries() * estimate).norm();
  result.estimate = std::move(estimate);
  std::sort(support.begin(), support.end());
  result.block_support = blocks_of(support, matrix.block_size());
  result.support = std::move(support);
  result.velocity_spectrum =
      velocity_spectrum(result.estimate, matrix.block_size());
  result.iterations = iterations;
  result.converged = converged;
  result.diagnostic = std::move(diagnostic);
  return result;
}

RecoveryResult zero_result(const ObservationMatrix& matrix,
                           const Eigen::VectorXcd& y) {
  return finalize(matrix, y, Eigen::VectorXcd::Zero(matrix.n_cols()), {}, 0,
                  true, "");
}

void check_measurement(const ObservationMatrix& matrix,
                       const Eigen::VectorXcd& y) {
  if (y.size() != matrix.n_rows())
    throw std::invalid_argument("measurement length does not match pulses");
}

std::vector<int> threshold_support(const Eigen::VectorXcd& estimate,
                                   double threshold) {
  std::vector<int> support;
  for (Eigen::Index i = 0; i < estimate.size(); ++i)
    if (std::sqrt(std::norm(estimate[i])) > threshold)
      support.push_back(static_cast<int>(i));
  return support;
}

// shared proximal-gradient core; block == 1 is the entrywise solver
RecoveryResult proximal_solve(const ObservationMatrix& matrix,
                              const Eigen::VectorXcd& y,
                              const SolverConfig& config, int block) {
  check_measurement(matrix, y);
  config.validate();
  if (y.isZero(0.0)) return zero_result(matrix, y);

  const auto& psi = matrix.entries();
  const double s = spectral::spectral_norm(matrix);
  const double lipschitz = s * s;
  const double step = 1.0 / lipschitz;

  const Eigen::VectorXcd correlation = psi.adjoint() * y;
  const double lambda =
      config.lambda.value_or(0.1 * max_block_norm(correlation, block));
  if (!(lambda > 0.0))
    throw std::invalid_argument("lambda must be positive");
  const double shrink_amount = lambda * step;

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(matrix.n_cols());
  Eigen::VectorXcd z = x;
  double t = 1.0;
  double objective_prev = 0.5 * y.squaredNorm();  // objective at x = 0

  const auto prox_step = [&](const Eigen::VectorXcd& base) {
    Eigen::VectorXcd next = base - step * (psi.adjoint() * (psi * base - y));
    shrink_blocks(next, shrink_amount, block);
    return next;
  };
  const auto objective_of = [&](const Eigen::VectorXcd& point) {
    return 0.5 * (y - psi * point).squaredNorm() +
           lambda * mixed_norm(point, block);
  };

  int iterations = 0;
  bool converged = false;
  std::string diagnostic;
  for (int it = 0; it < config.max_iterations; ++it) {
    iterations = it + 1;
    Eigen::VectorXcd x_next = prox_step(z);
    double objective = objective_of(x_next);
    if (!std::isfinite(objective)) {
      auto support = threshold_support(x, config.support_threshold);
      return finalize(matrix, y, std::move(x), std::move(support), iterations,
                      false, "objective diverged");
    }
    if (objective > objective_prev) {
      // restart the momentum; a plain descent step from x cannot increase
      // the objective at step <= 1/L
      z = x;
      t = 1.0;
      x_next = prox_step(z);
      objective = objective_of(x_next);
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = x_next + ((t - 1.0) / t_next) * (x_next - x);
    x = std::move(x_next);
    t = t_next;

    const double change = std::abs(objective - objective_prev);
    objective_prev = objective;
    if (change <= config.tolerance * std::max(objective, 1e-300)) {
      converged = true;
      break;
    }
  }
  if (!converged) diagnostic = "objective change above tolerance at max_iterations";
  auto support = threshold_support(x, config.support_threshold);
  return finalize(matrix, y, std::move(x), std::move(support), iterations,
                  converged, std::move(diagnostic));
}

}  // namespace

void SolverConfig::validate() const {
  if (lambda && !(*lambda > 0.0))
    throw std::invalid_argument("lambda must be positive");
  if (max_iterations < 1)
    throw std::invalid_argument("max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(support_threshold > 0.0))
    throw std::invalid_argument("support_threshold must be positive");
  if (!(admm_penalty > 0.0))
    throw std::invalid_argument("admm_penalty must be positive");
}

RecoveryResult matched_filter(const ObservationMatrix& matrix,
                              const Eigen::VectorXcd& y) {
  check_measurement(matrix, y);
  return finalize(matrix, y, matrix.entries().adjoint() * y, {}, 0, true, "");
}

RecoveryResult omp(const ObservationMatrix& matrix, const Eigen::VectorXcd& y,
                   int sparsity) {
  check_measurement(matrix, y);
  if (sparsity < 1 || sparsity > matrix.n_rows())
    throw std::invalid_argument("sparsity must lie in [1, N]");
  if (y.isZero(0.0)) return zero_result(matrix, y);

  const auto& psi = matrix.entries();
  const double residual_floor = 1e-13 * y.norm();

  Eigen::VectorXcd residual = y;
  std::vector<int> selected;
  std::vector<char> in_support(static_cast<std::size_t>(matrix.n_cols()), 0);
  Eigen::MatrixXcd columns(matrix.n_rows(), sparsity);
  Eigen::VectorXcd coef;

  while (static_cast<int>(selected.size()) < sparsity &&
         residual.norm() > residual_floor) {
    const Eigen::VectorXcd correlation = psi.adjoint() * residual;
    int pick = -1;
    double best = -1.0;
    for (Eigen::Index i = 0; i < correlation.size(); ++i) {
      if (in_support[static_cast<std::size_t>(i)]) continue;
      const double score = std::norm(correlation[i]);
      if (score > best) {  // strict: ties go to the lowest index
        best = score;
        pick = static_cast<int>(i);
      }
    }
    selected.push_back(pick);
    in_support[static_cast<std::size_t>(pick)] = 1;

    const int count = static_cast<int>(selected.size());
    columns.col(count - 1) = psi.col(pick);
    const auto active = columns.leftCols(count);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(active);
    if (qr.rank() < count)
      throw std::runtime_error("selected columns are rank deficient");
    coef = qr.solve(y);
    residual = y - active * coef;
  }

  Eigen::VectorXcd estimate = Eigen::VectorXcd::Zero(matrix.n_cols());
  for (std::size_t i = 0; i < selected.size(); ++i)
    estimate[selected[i]] = coef[static_cast<Eigen::Index>(i)];
  return finalize(matrix, y, std::move(estimate), selected,
                  static_cast<int>(selected.size()), true, "");
}

RecoveryResult block_omp(const ObservationMatrix& matrix,
                         const Eigen::VectorXcd& y, int block_sparsity) {
  check_measurement(matrix, y);
  if (block_sparsity < 1 || block_sparsity > matrix.n_blocks())
    throw std::invalid_argument("block sparsity must lie in [1, N]");
  if (y.isZero(0.0)) return zero_result(matrix, y);

  const int m = matrix.block_size();
  const double residual_floor = 1e-13 * y.norm();

  Eigen::VectorXcd residual = y;
  std::vector<int> selected;
  std::vector<char> in_support(static_cast<std::size_t>(matrix.n_blocks()), 0);
  Eigen::MatrixXcd columns(matrix.n_rows(), block_sparsity * m);
  Eigen::VectorXcd coef;

  while (static_cast<int>(selected.size()) < block_sparsity &&
         residual.norm() > residual_floor) {
    int pick = -1;
    double best = -1.0;
    for (int q = 0; q < matrix.n_blocks(); ++q) {
      if (in_support[static_cast<std::size_t>(q)]) continue;
      const double score = (matrix.block(q).adjoint() * residual).squaredNorm();
      if (score > best) {
        best = score;
        pick = q;
      }
    }
    selected.push_back(pick);
    in_support[static_cast<std::size_t>(pick)] = 1;

    const int count = static_cast<int>(selected.size());
    columns.middleCols((count - 1) * m, m) = matrix.block(pick);
    const auto active = columns.leftCols(count * m);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(active);
    if (qr.rank() < count * m)
      throw std::runtime_error("selected blocks are rank deficient");
    coef = qr.solve(y);
    residual = y - active * coef;
  }

  Eigen::VectorXcd estimate = Eigen::VectorXcd::Zero(matrix.n_cols());
  std::vector<int> support;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    for (int p = 0; p < m; ++p) {
      estimate[static_cast<Eigen::Index>(selected[i]) * m + p] =
          coef[static_cast<Eigen::Index>(i) * m + p];
      support.push_back(selected[i] * m + p);
    }
  }
  return finalize(matrix, y, std::move(estimate), std::move(support),
                  static_cast<int>(selected.size()), true, "");
}

RecoveryResult lasso_solve(const ObservationMatrix& matrix,
                           const Eigen::VectorXcd& y,
                           const SolverConfig& config) {
  return proximal_solve(matrix, y, config, 1);
}

RecoveryResult block_lasso_solve(const ObservationMatrix& matrix,
                                 const Eigen::VectorXcd& y,
                                 const SolverConfig& config) {
  return proximal_solve(matrix, y, config, matrix.block_size());
}

RecoveryResult basis_pursuit_solve(const ObservationMatrix& matrix,
                                   const Eigen::VectorXcd& y,
                                   const SolverConfig& config, bool blockwise) {
  check_measurement(matrix, y);
  config.validate();
  if (y.isZero(0.0)) return zero_result(matrix, y);

  const auto& psi = matrix.entries();
  const int block = blockwise ? matrix.block_size() : 1;
  const double rho = config.admm_penalty;
  const double y_norm = y.norm();
  const Eigen::Index mn = matrix.n_cols();

  // rows of the dictionary are independent for any code draw, so the
  // row Gram factorizes; in Simplified mode it is exactly M * I
  const Eigen::MatrixXcd row_gram = psi * psi.adjoint();
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(row_gram);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("row Gram factorization failed");
  const auto project_feasible = [&](const Eigen::VectorXcd& v) {
    return Eigen::VectorXcd(v - psi.adjoint() * ldlt.solve(psi * v - y));
  };

  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(mn);
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(mn);
  Eigen::VectorXcd x;

  int iterations = 0;
  bool converged = false;
  const double eps_abs = 1e-12 * std::sqrt(static_cast<double>(mn));
  for (int it = 0; it < config.max_iterations; ++it) {
    iterations = it + 1;
    x = project_feasible(z - u);
    Eigen::VectorXcd z_next = x + u;
    shrink_blocks(z_next, 1.0 / rho, block);
    const double dual_residual = rho * (z_next - z).norm();
    z = std::move(z_next);
    u += x - z;

    const double primal_residual = (x - z).norm();
    const double eps_primal =
        eps_abs + 1e-10 * std::max(x.norm(), z.norm());
    const double eps_dual = eps_abs + 1e-10 * rho * u.norm();
    const double feasibility = (psi * z - y).norm();
    if (feasibility <= config.tolerance * y_norm &&
        primal_residual <= eps_primal && dual_residual <= eps_dual) {
      converged = true;
      break;
    }
  }

  std::string diagnostic;
  if (!converged) diagnostic = "alternating-direction scheme did not converge";
  return finalize(matrix, y, z, threshold_support(z, config.support_threshold),
                  iterations, converged, std::move(diagnostic));
}

std::vector<int> extract_support_topk(const Eigen::VectorXcd& estimate,
                                      int count) {
  if (count < 0 || count > estimate.size())
    throw std::invalid_argument("count must lie in [0, MN]");
  std::vector<int> order(static_cast<std::size_t>(estimate.size()));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + count, order.end(),
                    [&](int a, int b) {
                      const double ma = std::norm(estimate[a]);
                      const double mb = std::norm(estimate[b]);
                      if (ma != mb) return ma > mb;
                      return a < b;  // ties to the lowest index
                    });
  std::vector<int> support(order.begin(), order.begin() + count);
  std::sort(support.begin(), support.end());
  return support;
}

Eigen::VectorXcd debias_least_squares(const ObservationMatrix& matrix,
                                      const Eigen::VectorXcd& y,
                                      std::span<const int> support,
                                      bool* rank_deficient) {
  check_measurement(matrix, y);
  if (static_cast<int>(support.size()) > matrix.n_rows())
    throw std::invalid_argument("support larger than the measurement count");
  if (rank_deficient) *rank_deficient = false;

  Eigen::VectorXcd refined = Eigen::VectorXcd::Zero(matrix.n_cols());
  if (support.empty()) return refined;

  Eigen::MatrixXcd columns(matrix.n_rows(),
                           static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    const int idx = support[i];
    if (idx < 0 || idx >= matrix.n_cols())
      throw std::invalid_argument("support index out of range");
    columns.col(static_cast<Eigen::Index>(i)) = matrix.entries().col(idx);
  }
  // complete orthogonal decomposition yields the minimum-norm solution and
  // doubles as the pseudo-inverse when the support is rank deficient
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(columns);
  if (cod.rank() < static_cast<Eigen::Index>(support.size()) && rank_deficient)
    *rank_deficient = true;
  const Eigen::VectorXcd coef = cod.solve(y);
  for (std::size_t i = 0; i < support.size(); ++i)
    refined[support[i]] = coef[static_cast<Eigen::Index>(i)];
  return refined;
}

Eigen::VectorXd velocity_spectrum(const Eigen::VectorXcd& estimate,
                                  int block_size) {
  if (block_size < 1 || estimate.size() % block_size != 0)
    throw std::invalid_argument("estimate length must be divisible by M");
  const Eigen::Index blocks = estimate.size() / block_size;
  Eigen::VectorXd spectrum(blocks);
  for (Eigen::Index q = 0; q < blocks; ++q)
    spectrum[q] = block_norm(estimate.segment(q * block_size, block_size));
  return spectrum;
}

}  // namespace rsfr::recovery
