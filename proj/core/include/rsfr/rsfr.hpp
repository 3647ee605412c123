#pragma once

#include "rsfr/bounds.hpp"
#include "rsfr/experiments.hpp"
#include "rsfr/frequency_codes.hpp"
#include "rsfr/observation_matrix.hpp"
#include "rsfr/radar_params.hpp"
#include "rsfr/recovery.hpp"
#include "rsfr/rng.hpp"
#include "rsfr/serialization.hpp"
#include "rsfr/spectral.hpp"
#include "rsfr/target_scene.hpp"
#include "rsfr/version.hpp"
