#include "rsfr/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsfr::bounds {

namespace {

void require_m_at_least_two(int n_freqs) {
  if (n_freqs < 2)
    throw std::invalid_argument("the tail bound needs M >= 2");
}

}  // namespace

double singular_value_tail_bound(const TailBoundQuery& query) {
  require_m_at_least_two(query.n_freqs);
  if (query.n_pulses < 1) throw std::invalid_argument("n_pulses must be >= 1");
  if (!(query.epsilon > 0.0) || query.epsilon > 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  return std::exp(-query.n_pulses * query.epsilon * query.epsilon /
                  (4.0 * (query.n_freqs - 1)));
}

namespace {

ProbabilityBound coherence_bound(double c, int n_freqs, int n_pulses,
                                 double prefactor) {
  require_m_at_least_two(n_freqs);
  if (n_pulses < 1) throw std::invalid_argument("n_pulses must be >= 1");
  if (c < 0.0 || !std::isfinite(c))
    throw std::invalid_argument("threshold must be >= 0");
  if (prefactor == 0.0) return {0.0, 0.0};  // nothing to maximize over
  const double z = std::sqrt(static_cast<double>(n_pulses)) * c -
                   std::sqrt(static_cast<double>(n_freqs - 1));
  if (z < 0.0) return {1.0, 1.0};  // below the concentration radius
  const double raw = prefactor * std::exp(-z * z / (4.0 * (n_freqs - 1)));
  return {std::min(1.0, raw), raw};
}

}  // namespace

ProbabilityBound intra_coherence_ccdf_bound(double c, int n_freqs,
                                            int n_pulses) {
  return coherence_bound(c, n_freqs, n_pulses,
                         static_cast<double>(n_freqs));
}

ProbabilityBound inter_coherence_ccdf_bound(double c, int n_freqs,
                                            int n_pulses) {
  return coherence_bound(c, n_freqs, n_pulses,
                         static_cast<double>(n_freqs) * (n_pulses / 2));
}

ConditionResult block_incoherence_condition(const GuaranteeInputs& inputs) {
  if (inputs.n_freqs < 1 || inputs.n_pulses < 1 ||
      static_cast<long long>(inputs.n_freqs) * inputs.n_pulses < 2)
    throw std::invalid_argument("need M*N >= 2");
  if (inputs.block_sparsity < 0 || inputs.block_sparsity > inputs.n_pulses)
    throw std::invalid_argument("block sparsity must lie in [0, N]");
  if (inputs.mu_intra < 0 || inputs.mu_inter < 0 || inputs.spectral_norm < 0)
    throw std::invalid_argument("coherence inputs must be nonnegative");

  const double n = inputs.n_pulses;
  const double k = inputs.block_sparsity;
  const double s = inputs.spectral_norm;
  const double log_mn =
      std::log(static_cast<double>(inputs.n_freqs) * inputs.n_pulses);

  ConditionResult out;
  out.lhs = 17.0 * std::sqrt(k * log_mn * (1.0 + inputs.mu_intra) / n) * s +
            48.0 * inputs.mu_inter * log_mn + (2.0 * k / n) * s * s +
            3.0 * inputs.mu_intra;
  out.satisfied = out.lhs <= 0.25;
  return out;
}

double recovery_success_probability(int n_freqs, std::uint64_t n_pulses) {
  const double mn = static_cast<double>(n_freqs) * static_cast<double>(n_pulses);
  return 1.0 - 4.0 * std::pow(mn, -4.0 * std::log(2.0));
}

SparsityGuarantee guaranteed_block_sparsity(int n_freqs,
                                            std::uint64_t n_pulses,
                                            double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (n_freqs < 1 || n_pulses < 1)
    throw std::invalid_argument("need M >= 1 and N >= 1");
  const double m = n_freqs;
  const double n = static_cast<double>(n_pulses);
  if (m * n < 2.0) throw std::invalid_argument("need M*N >= 2");

  const double log_mn = std::log(m * n);
  const double log_eps = std::log(epsilon);
  const double root = std::sqrt((m - 1.0) / n);

  SparsityGuarantee out;
  out.delta1 =
      24.0 * root * log_mn * (2.0 * std::sqrt(log_mn - log_eps) + 1.0);
  out.delta2 =
      1.5 * root * (2.0 * std::sqrt(std::log(2.0 * m) - log_eps) + 1.0);

  const double margin = 0.125 - out.delta1 - out.delta2;
  if (margin <= 0.0) {
    out.k_max = 0;
    out.vacuous = true;
    return out;
  }
  const double k = n * margin * margin /
                   (81.0 * m * log_mn * (1.0 + 2.0 * out.delta2 / 3.0));
  out.k_max = static_cast<std::uint64_t>(std::floor(k));
  out.vacuous = out.k_max == 0;
  return out;
}

}  // namespace rsfr::bounds
