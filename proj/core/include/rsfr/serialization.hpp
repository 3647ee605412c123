#pragma once

#include <string>

#include "rsfr/experiments.hpp"
#include "rsfr/radar_params.hpp"
#include "rsfr/recovery.hpp"
#include "rsfr/spectral.hpp"
#include "rsfr/target_scene.hpp"

namespace rsfr::io {

/// Scene file: radar parameters plus the target list. Field names mirror
/// the struct members; complex numbers are [re, im] pairs.
struct SceneConfig {
  RadarParams params;
  TargetScene scene;
};

std::string write_scene_config(const SceneConfig& config);
SceneConfig read_scene_config(const std::string& text);

std::string write_coherence_report(const spectral::CoherenceReport& report);
spectral::CoherenceReport read_coherence_report(const std::string& text);

/// block_size reshapes the estimate into the M x N magnitude grid
/// (row = range bin, column = velocity bin) when include_grid is set.
std::string write_recovery_result(const recovery::RecoveryResult& result,
                                  int block_size, bool include_grid = true);
recovery::RecoveryResult read_recovery_result(const std::string& text);

std::string write_analysis_report(const experiments::AnalysisReport& report);
experiments::AnalysisReport read_analysis_report(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rsfr::io
