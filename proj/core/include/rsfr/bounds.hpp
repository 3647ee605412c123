#pragma once

#include <cstdint>

namespace rsfr::bounds {

/// Tail query for one (shifted) cross-Gram singular value: the chance
/// that it exceeds sqrt((M-1)/N) + epsilon. Requires M >= 2 (the bound is
/// degenerate at M = 1) and epsilon in (0, 1].
struct TailBoundQuery {
  int n_freqs = 0;     ///< M
  int n_pulses = 0;    ///< N
  double epsilon = 0;  ///< exceedance margin
};

/// exp(-N * epsilon^2 / (4 * (M - 1))). Throws std::invalid_argument on
/// an out-of-range query.
double singular_value_tail_bound(const TailBoundQuery& query);

/// A probability bound clamped into [0, 1]; raw keeps the unclamped
/// value for diagnostics.
struct ProbabilityBound {
  double value = 1.0;
  double raw = 1.0;
};

/// Union bound on P(mu_intra > c): M * exp(-z^2 / (4*(M-1))) with
/// z = sqrt(N)*c - sqrt(M-1), clamped to 1. Below z = 0 the bound is
/// vacuous and 1 is returned. Throws on negative c or M < 2.
ProbabilityBound intra_coherence_ccdf_bound(double c, int n_freqs,
                                            int n_pulses);

/// Same with prefactor M * floor(N/2) for P(mu_inter > c); the prefactor
/// counts the distinct block lags. N = 1 yields a zero bound.
ProbabilityBound inter_coherence_ccdf_bound(double c, int n_freqs,
                                            int n_pulses);

/// Ingredients of the block-incoherence recovery condition.
struct GuaranteeInputs {
  double mu_intra = 0.0;
  double mu_inter = 0.0;
  double spectral_norm = 0.0;
  int block_sparsity = 0;  ///< K
  int n_freqs = 0;         ///< M
  int n_pulses = 0;        ///< N
};

struct ConditionResult {
  double lhs = 0.0;
  bool satisfied = false;
};

/// Evaluates the sufficient condition for exact block-sparse recovery:
///
///   17*sqrt(K*log(MN)*(1+mu_I)/N)*s + 48*mu_B*log(MN) + (2K/N)*s^2 + 3*mu_I
///
/// must not exceed 1/4. Natural logarithm throughout. Requires M*N >= 2.
ConditionResult block_incoherence_condition(const GuaranteeInputs& inputs);

/// Lower bound on the success probability attached to the condition,
/// 1 - 4 * (MN)^(-4*log 2).
double recovery_success_probability(int n_freqs, std::uint64_t n_pulses);

/// Largest block count the average-case analysis can certify.
struct SparsityGuarantee {
  std::uint64_t k_max = 0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  /// True when the analysis certifies nothing (k_max == 0); at desk-scale
  /// N the constants delta1, delta2 dominate 1/8 and this is the norm.
  bool vacuous = true;
};

/// Evaluates k_max = floor(N * (1/8 - d1 - d2)^2 / (81*M*log(MN)*(1+2*d2/3)))
/// with
///   d1 = 24*sqrt((M-1)/N)*log(MN)*(2*sqrt(log(MN)-log(eps))+1),
///   d2 = (3/2)*sqrt((M-1)/N)*(2*sqrt(log(2M)-log(eps))+1).
/// The condition then holds with probability at least 1 - eps over the
/// code draw whenever the block count is at most k_max. Natural log;
/// requires eps in (0, 1) and M*N >= 2.
SparsityGuarantee guaranteed_block_sparsity(int n_freqs,
                                            std::uint64_t n_pulses,
                                            double epsilon);

}  // namespace rsfr::bounds
