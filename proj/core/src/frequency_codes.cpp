#include "rsfr/frequency_codes.hpp"

#include <cmath>
#include <stdexcept>

#include "rsfr/rng.hpp"

namespace rsfr {

void RadarParams::validate() const {
  if (n_pulses < 1) throw std::invalid_argument("n_pulses must be >= 1");
  if (n_freqs < 1) throw std::invalid_argument("n_freqs must be >= 1");
  if (!(freq_step > 0.0) || !std::isfinite(freq_step))
    throw std::invalid_argument("freq_step must be positive and finite");
  if (!(carrier > 0.0) || !std::isfinite(carrier))
    throw std::invalid_argument("carrier must be positive and finite");
  if (!(pri > 0.0) || !std::isfinite(pri))
    throw std::invalid_argument("pri must be positive and finite");
}

RadarParams with_relative_bandwidth(RadarParams params, double rb) {
  if (!(rb > 0.0) || !std::isfinite(rb))
    throw std::invalid_argument("relative bandwidth must be positive");
  params.carrier = params.synthetic_bandwidth() / rb;
  params.validate();
  return params;
}

FrequencyCodes draw_codes(const RadarParams& params, std::uint64_t seed) {
  params.validate();
  rng::Engine engine(seed, rng::Stream::Codes);
  FrequencyCodes out;
  out.seed = seed;
  out.codes.resize(static_cast<std::size_t>(params.n_pulses));
  for (auto& c : out.codes) c = engine.uniform_index(params.n_freqs);
  return out;
}

}  // namespace rsfr
