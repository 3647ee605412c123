#pragma once

#include <cstdint>
#include <vector>

#include "rsfr/radar_params.hpp"

namespace rsfr {

/// Per-pulse carrier selection: codes[n] in {0, ..., M-1} picks the
/// frequency grid point of pulse n. Regenerating from the same seed
/// reproduces the sequence bit for bit.
struct FrequencyCodes {
  std::vector<int> codes;
  std::uint64_t seed = 0;

  int n_pulses() const { return static_cast<int>(codes.size()); }
};

/// Draws N codes i.i.d. uniform over {0, ..., M-1} from the seeded
/// code substream.
FrequencyCodes draw_codes(const RadarParams& params, std::uint64_t seed);

}  // namespace rsfr
