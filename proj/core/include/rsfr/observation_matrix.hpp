#pragma once

#include <Eigen/Core>
#include <string>

#include "rsfr/frequency_codes.hpp"
#include "rsfr/radar_params.hpp"

namespace rsfr {

/// Doppler treatment in the steering phases. Exact applies the per-pulse
/// scale xi_n = 1 + codes[n] * freq_step / carrier; Simplified sets
/// xi_n = 1, which is accurate when the relative bandwidth is negligible
/// and is the regime where the closed-form spectral results hold.
enum class DopplerMode { Exact, Simplified };

std::string to_string(DopplerMode mode);
DopplerMode doppler_mode_from_string(const std::string& name);

/// The N x (M*N) dictionary of unit-norm steering columns. Column q*M+p
/// holds the slow-time phase history of a scatterer at range bin p and
/// velocity bin q:
///
///   entries(n, q*M+p) = exp(j*2*pi*(p*codes[n]/M + q*xi_n*n/N)) / sqrt(N)
///
/// Columns are grouped into N velocity blocks of M range columns each.
class ObservationMatrix {
 public:
  ObservationMatrix(Eigen::MatrixXcd entries, RadarParams params,
                    FrequencyCodes codes, DopplerMode mode);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  const RadarParams& params() const { return params_; }
  const FrequencyCodes& codes() const { return codes_; }
  DopplerMode mode() const { return mode_; }

  int n_rows() const { return params_.n_pulses; }
  int n_cols() const { return params_.n_pulses * params_.n_freqs; }
  int block_size() const { return params_.n_freqs; }
  int n_blocks() const { return params_.n_pulses; }

  /// N x M view of velocity block q.
  Eigen::MatrixXcd::ConstBlockXpr block(int q) const;

  /// Steering column for range bin p, velocity bin q.
  Eigen::MatrixXcd::ConstColXpr column(int p, int q) const;

 private:
  Eigen::MatrixXcd entries_;
  RadarParams params_;
  FrequencyCodes codes_;
  DopplerMode mode_;
};

/// Assembles the dictionary for the given mode. Throws on a length or
/// range mismatch between codes and params.
ObservationMatrix build_observation_matrix(const RadarParams& params,
                                           const FrequencyCodes& codes,
                                           DopplerMode mode);

namespace detail {

/// Entry assembly shared by both modes; xi holds the per-pulse Doppler
/// scale factors (all ones reproduces Simplified mode bit for bit).
Eigen::MatrixXcd assemble_entries(const RadarParams& params,
                                  const FrequencyCodes& codes,
                                  const Eigen::VectorXd& xi);

Eigen::VectorXd doppler_factors(const RadarParams& params,
                                const FrequencyCodes& codes, DopplerMode mode);

}  // namespace detail

}  // namespace rsfr
