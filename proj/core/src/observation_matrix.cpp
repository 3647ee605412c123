#include "rsfr/observation_matrix.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace rsfr {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559005768;

void check_consistency(const RadarParams& params, const FrequencyCodes& codes) {
  params.validate();
  if (codes.n_pulses() != params.n_pulses)
    throw std::invalid_argument("code sequence length does not match n_pulses");
  for (int c : codes.codes)
    if (c < 0 || c >= params.n_freqs)
      throw std::invalid_argument("frequency code outside {0, ..., M-1}");
}
}  // namespace

std::string to_string(DopplerMode mode) {
  return mode == DopplerMode::Exact ? "exact" : "simplified";
}

DopplerMode doppler_mode_from_string(const std::string& name) {
  if (name == "exact") return DopplerMode::Exact;
  if (name == "simplified") return DopplerMode::Simplified;
  throw std::invalid_argument("unknown doppler mode: " + name);
}

ObservationMatrix::ObservationMatrix(Eigen::MatrixXcd entries,
                                     RadarParams params, FrequencyCodes codes,
                                     DopplerMode mode)
    : entries_(std::move(entries)),
      params_(params),
      codes_(std::move(codes)),
      mode_(mode) {
  check_consistency(params_, codes_);
  if (entries_.rows() != params_.n_pulses ||
      entries_.cols() !=
          static_cast<Eigen::Index>(params_.n_pulses) * params_.n_freqs)
    throw std::invalid_argument("entry matrix has wrong dimensions");
}

Eigen::MatrixXcd::ConstBlockXpr ObservationMatrix::block(int q) const {
  if (q < 0 || q >= n_blocks()) throw std::out_of_range("block index");
  return entries_.block(0, static_cast<Eigen::Index>(q) * block_size(),
                        n_rows(), block_size());
}

Eigen::MatrixXcd::ConstColXpr ObservationMatrix::column(int p, int q) const {
  if (q < 0 || q >= n_blocks()) throw std::out_of_range("velocity index");
  if (p < 0 || p >= block_size()) throw std::out_of_range("range index");
  return entries_.col(static_cast<Eigen::Index>(q) * block_size() + p);
}

namespace detail {

Eigen::VectorXd doppler_factors(const RadarParams& params,
                                const FrequencyCodes& codes,
                                DopplerMode mode) {
  Eigen::VectorXd xi = Eigen::VectorXd::Ones(params.n_pulses);
  if (mode == DopplerMode::Exact) {
    const double step_over_carrier = params.freq_step / params.carrier;
    for (int n = 0; n < params.n_pulses; ++n)
      xi[n] = 1.0 + codes.codes[static_cast<std::size_t>(n)] * step_over_carrier;
  }
  return xi;
}

Eigen::MatrixXcd assemble_entries(const RadarParams& params,
                                  const FrequencyCodes& codes,
                                  const Eigen::VectorXd& xi) {
  const int n_pulses = params.n_pulses;
  const int m_freqs = params.n_freqs;
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(n_pulses));

  Eigen::MatrixXcd out(n_pulses, static_cast<Eigen::Index>(n_pulses) * m_freqs);
  for (int n = 0; n < n_pulses; ++n) {
    const double code_phase = kTwoPi * codes.codes[static_cast<std::size_t>(n)] /
                              static_cast<double>(m_freqs);
    const double pulse_phase = kTwoPi * xi[n] * n / static_cast<double>(n_pulses);
    for (int q = 0; q < n_pulses; ++q) {
      const double velocity_phase = pulse_phase * q;
      for (int p = 0; p < m_freqs; ++p) {
        out(n, static_cast<Eigen::Index>(q) * m_freqs + p) =
            std::polar(amplitude, code_phase * p + velocity_phase);
      }
    }
  }
  return out;
}

}  // namespace detail

ObservationMatrix build_observation_matrix(const RadarParams& params,
                                           const FrequencyCodes& codes,
                                           DopplerMode mode) {
  check_consistency(params, codes);
  const Eigen::VectorXd xi = detail::doppler_factors(params, codes, mode);
  return ObservationMatrix(detail::assemble_entries(params, codes, xi), params,
                           codes, mode);
}

}  // namespace rsfr
