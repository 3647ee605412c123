#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <vector>

#include "rsfr/observation_matrix.hpp"
#include "rsfr/radar_params.hpp"

namespace rsfr {

struct Scatterer {
  int range_index = 0;                      ///< p in {0, ..., M-1}
  std::complex<double> amplitude{0.0, 0.0};  ///< scattering coefficient
};

/// One extended target: a cluster of scatterers sharing a velocity bin.
struct Target {
  int velocity_index = 0;  ///< q in {0, ..., N-1}
  std::vector<Scatterer> scatterers;
};

struct TargetScene {
  std::vector<Target> targets;

  int total_scatterers() const;

  /// Throws std::invalid_argument if any index is off the grid or any
  /// (range, velocity) cell is occupied twice.
  void validate(const RadarParams& params) const;
};

/// Draws a random scene: n_targets distinct velocity bins chosen uniformly
/// without replacement, each holding scatterers_per_target scatterers at
/// consecutive range bins from a uniform random offset (wrapping mod M),
/// with i.i.d. unit-variance circular complex Gaussian amplitudes.
TargetScene synthesize_scene(const RadarParams& params, int n_targets,
                             int scatterers_per_target, std::uint64_t seed);

/// Length-M*N complex vector with an M-sized block per velocity bin.
struct BlockSparseVector {
  Eigen::VectorXcd values;
  int block_size = 1;

  int n_blocks() const {
    return static_cast<int>(values.size()) / block_size;
  }

  /// Indices of blocks that are not all-zero, ascending.
  std::vector<int> block_support() const;

  /// Indices of entries with magnitude strictly above threshold, ascending.
  std::vector<int> support(double threshold = 0.0) const;
};

/// Lays the scene out on the grid: entry q*M+p holds sqrt(N) * amplitude
/// for a scatterer at (p, q), the coherent-integration gain of N pulses.
BlockSparseVector scene_to_vector(const TargetScene& scene,
                                  const RadarParams& params);

/// One CPI of slow-time samples.
struct Measurement {
  Eigen::VectorXcd samples;
  double noise_power = 0.0;  ///< per-entry variance of the additive noise
};

/// y = Psi * x + w with w i.i.d. circular complex Gaussian of per-entry
/// variance noise_power (exact when noise_power == 0). Throws on a
/// dimension mismatch or negative noise power.
Measurement synthesize_measurement(const ObservationMatrix& matrix,
                                   const BlockSparseVector& x,
                                   double noise_power, std::uint64_t seed);

/// sigma^2 from SNR = 10*log10(1 / sigma^2).
double snr_to_noise_power(double snr_db);

}  // namespace rsfr
