#include "rsfr/target_scene.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "rsfr/rng.hpp"

namespace rsfr {

int TargetScene::total_scatterers() const {
  int count = 0;
  for (const auto& target : targets)
    count += static_cast<int>(target.scatterers.size());
  return count;
}

void TargetScene::validate(const RadarParams& params) const {
  std::set<std::pair<int, int>> occupied;
  for (const auto& target : targets) {
    if (target.velocity_index < 0 || target.velocity_index >= params.n_pulses)
      throw std::invalid_argument("velocity index off the grid");
    for (const auto& scatterer : target.scatterers) {
      if (scatterer.range_index < 0 || scatterer.range_index >= params.n_freqs)
        throw std::invalid_argument("range index off the grid");
      if (!occupied.emplace(scatterer.range_index, target.velocity_index).second)
        throw std::invalid_argument("duplicate scatterer placement");
    }
  }
}

TargetScene synthesize_scene(const RadarParams& params, int n_targets,
                             int scatterers_per_target, std::uint64_t seed) {
  params.validate();
  if (n_targets < 0) throw std::invalid_argument("n_targets must be >= 0");
  if (n_targets > params.n_pulses)
    throw std::invalid_argument("more targets than velocity bins");
  if (scatterers_per_target < 1 || scatterers_per_target > params.n_freqs)
    throw std::invalid_argument("scatterers_per_target must be in [1, M]");

  rng::Engine engine(seed, rng::Stream::Scene);

  // partial Fisher-Yates: K distinct velocity bins, uniform without
  // replacement
  std::vector<int> bins(static_cast<std::size_t>(params.n_pulses));
  std::iota(bins.begin(), bins.end(), 0);
  TargetScene scene;
  scene.targets.reserve(static_cast<std::size_t>(n_targets));
  for (int k = 0; k < n_targets; ++k) {
    const int j = k + engine.uniform_index(params.n_pulses - k);
    std::swap(bins[static_cast<std::size_t>(k)], bins[static_cast<std::size_t>(j)]);

    Target target;
    target.velocity_index = bins[static_cast<std::size_t>(k)];
    const int offset = engine.uniform_index(params.n_freqs);
    target.scatterers.reserve(static_cast<std::size_t>(scatterers_per_target));
    for (int i = 0; i < scatterers_per_target; ++i) {
      Scatterer s;
      s.range_index = (offset + i) % params.n_freqs;
      s.amplitude = engine.complex_gaussian();
      target.scatterers.push_back(s);
    }
    scene.targets.push_back(std::move(target));
  }
  return scene;
}

std::vector<int> BlockSparseVector::block_support() const {
  std::vector<int> out;
  for (int q = 0; q < n_blocks(); ++q) {
    if (!values.segment(static_cast<Eigen::Index>(q) * block_size, block_size)
             .isZero(0.0))
      out.push_back(q);
  }
  return out;
}

std::vector<int> BlockSparseVector::support(double threshold) const {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (std::abs(values[i]) > threshold) out.push_back(static_cast<int>(i));
  return out;
}

BlockSparseVector scene_to_vector(const TargetScene& scene,
                                  const RadarParams& params) {
  params.validate();
  scene.validate(params);
  BlockSparseVector x;
  x.block_size = params.n_freqs;
  x.values = Eigen::VectorXcd::Zero(
      static_cast<Eigen::Index>(params.n_pulses) * params.n_freqs);
  const double gain = std::sqrt(static_cast<double>(params.n_pulses));
  for (const auto& target : scene.targets)
    for (const auto& scatterer : target.scatterers)
      x.values[static_cast<Eigen::Index>(target.velocity_index) *
                   params.n_freqs +
               scatterer.range_index] = gain * scatterer.amplitude;
  return x;
}

Measurement synthesize_measurement(const ObservationMatrix& matrix,
                                   const BlockSparseVector& x,
                                   double noise_power, std::uint64_t seed) {
  if (x.block_size != matrix.block_size() ||
      x.values.size() != matrix.n_cols())
    throw std::invalid_argument("scene vector does not match the dictionary");
  if (noise_power < 0.0 || !std::isfinite(noise_power))
    throw std::invalid_argument("noise power must be >= 0");

  Measurement out;
  out.noise_power = noise_power;
  out.samples = matrix.entries() * x.values;
  if (noise_power > 0.0) {
    rng::Engine engine(seed, rng::Stream::Noise);
    const double scale = std::sqrt(noise_power);
    for (Eigen::Index n = 0; n < out.samples.size(); ++n)
      out.samples[n] += scale * engine.complex_gaussian();
  }
  return out;
}

double snr_to_noise_power(double snr_db) {
  return std::pow(10.0, -snr_db / 10.0);
}

}  // namespace rsfr
