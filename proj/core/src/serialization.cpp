#include "rsfr/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rsfr::io {

namespace {

using nlohmann::json;

json complex_to_json(const std::complex<double>& z) {
  return json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::runtime_error("complex values must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json params_to_json(const RadarParams& params) {
  return {{"n_pulses", params.n_pulses},
          {"n_freqs", params.n_freqs},
          {"freq_step", params.freq_step},
          {"carrier", params.carrier},
          {"pri", params.pri}};
}

RadarParams params_from_json(const json& j) {
  RadarParams params;
  params.n_pulses = j.at("n_pulses").get<int>();
  params.n_freqs = j.at("n_freqs").get<int>();
  params.freq_step = j.at("freq_step").get<double>();
  params.carrier = j.at("carrier").get<double>();
  params.pri = j.at("pri").get<double>();
  return params;
}

json scene_to_json(const TargetScene& scene) {
  json targets = json::array();
  for (const auto& target : scene.targets) {
    json scatterers = json::array();
    for (const auto& scatterer : target.scatterers) {
      scatterers.push_back({{"range_index", scatterer.range_index},
                            {"amplitude", complex_to_json(scatterer.amplitude)}});
    }
    targets.push_back({{"velocity_index", target.velocity_index},
                       {"scatterers", scatterers}});
  }
  return {{"targets", targets}};
}

TargetScene scene_from_json(const json& j) {
  TargetScene scene;
  for (const auto& jt : j.at("targets")) {
    Target target;
    target.velocity_index = jt.at("velocity_index").get<int>();
    for (const auto& js : jt.at("scatterers")) {
      Scatterer scatterer;
      scatterer.range_index = js.at("range_index").get<int>();
      scatterer.amplitude = complex_from_json(js.at("amplitude"));
      target.scatterers.push_back(scatterer);
    }
    scene.targets.push_back(std::move(target));
  }
  return scene;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error("malformed JSON");
  return j;
}

}  // namespace

std::string write_scene_config(const SceneConfig& config) {
  json j;
  j["params"] = params_to_json(config.params);
  j["scene"] = scene_to_json(config.scene);
  return j.dump(2) + "\n";
}

SceneConfig read_scene_config(const std::string& text) {
  const json j = parse(text);
  SceneConfig config;
  try {
    config.params = params_from_json(j.at("params"));
    config.scene = scene_from_json(j.at("scene"));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bad scene config: ") + e.what());
  }
  config.params.validate();
  config.scene.validate(config.params);
  return config;
}

std::string write_coherence_report(const spectral::CoherenceReport& report) {
  json j;
  j["mu_intra"] = report.mu_intra;
  j["mu_inter"] = report.mu_inter;
  j["spectral_norm"] = report.spectral_norm;
  j["mode"] = to_string(report.mode);
  j["method"] = to_string(report.method);
  return j.dump(2) + "\n";
}

spectral::CoherenceReport read_coherence_report(const std::string& text) {
  const json j = parse(text);
  spectral::CoherenceReport report;
  try {
    report.mu_intra = j.at("mu_intra").get<double>();
    report.mu_inter = j.at("mu_inter").get<double>();
    report.spectral_norm = j.at("spectral_norm").get<double>();
    report.mode = doppler_mode_from_string(j.at("mode").get<std::string>());
    report.method = spectral::coherence_method_from_string(
        j.at("method").get<std::string>());
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bad coherence report: ") + e.what());
  }
  return report;
}

std::string write_recovery_result(const recovery::RecoveryResult& result,
                                  int block_size, bool include_grid) {
  json j;
  json estimate = json::array();
  for (Eigen::Index i = 0; i < result.estimate.size(); ++i)
    estimate.push_back(complex_to_json(result.estimate[i]));
  j["estimate"] = std::move(estimate);
  j["support"] = result.support;
  j["block_support"] = result.block_support;
  j["velocity_spectrum"] = std::vector<double>(
      result.velocity_spectrum.data(),
      result.velocity_spectrum.data() + result.velocity_spectrum.size());
  j["iterations"] = result.iterations;
  j["residual_norm"] = result.residual_norm;
  j["converged"] = result.converged;
  j["diagnostic"] = result.diagnostic;
  if (include_grid && block_size > 0) {
    // row p, column q: |estimate[q*M+p]|
    const Eigen::Index blocks = result.estimate.size() / block_size;
    json grid = json::array();
    for (int p = 0; p < block_size; ++p) {
      json row = json::array();
      for (Eigen::Index q = 0; q < blocks; ++q)
        row.push_back(std::abs(result.estimate[q * block_size + p]));
      grid.push_back(std::move(row));
    }
    j["magnitude_grid"] = std::move(grid);
  }
  return j.dump(2) + "\n";
}

recovery::RecoveryResult read_recovery_result(const std::string& text) {
  const json j = parse(text);
  recovery::RecoveryResult result;
  try {
    const auto& estimate = j.at("estimate");
    result.estimate.resize(static_cast<Eigen::Index>(estimate.size()));
    for (std::size_t i = 0; i < estimate.size(); ++i)
      result.estimate[static_cast<Eigen::Index>(i)] =
          complex_from_json(estimate[i]);
    result.support = j.at("support").get<std::vector<int>>();
    result.block_support = j.at("block_support").get<std::vector<int>>();
    const auto spectrum = j.at("velocity_spectrum").get<std::vector<double>>();
    result.velocity_spectrum =
        Eigen::Map<const Eigen::VectorXd>(spectrum.data(),
                                          static_cast<Eigen::Index>(spectrum.size()));
    result.iterations = j.at("iterations").get<int>();
    result.residual_norm = j.at("residual_norm").get<double>();
    result.converged = j.at("converged").get<bool>();
    result.diagnostic = j.at("diagnostic").get<std::string>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bad recovery result: ") + e.what());
  }
  return result;
}

std::string write_analysis_report(const experiments::AnalysisReport& report) {
  json j;
  j["coherence"] = {{"mu_intra", report.coherence.mu_intra},
                    {"mu_inter", report.coherence.mu_inter},
                    {"spectral_norm", report.coherence.spectral_norm},
                    {"mode", to_string(report.coherence.mode)},
                    {"method", to_string(report.coherence.method)}};
  j["block_sparsity"] = report.block_sparsity;
  j["condition"] = {{"lhs", report.condition.lhs},
                    {"satisfied", report.condition.satisfied}};
  j["success_probability"] = report.success_probability;
  j["epsilon"] = report.epsilon;
  j["guarantee"] = {{"k_max", report.guarantee.k_max},
                    {"delta1", report.guarantee.delta1},
                    {"delta2", report.guarantee.delta2},
                    {"vacuous", report.guarantee.vacuous}};
  return j.dump(2) + "\n";
}

experiments::AnalysisReport read_analysis_report(const std::string& text) {
  const json j = parse(text);
  experiments::AnalysisReport report;
  try {
    const auto& coherence = j.at("coherence");
    report.coherence.mu_intra = coherence.at("mu_intra").get<double>();
    report.coherence.mu_inter = coherence.at("mu_inter").get<double>();
    report.coherence.spectral_norm =
        coherence.at("spectral_norm").get<double>();
    report.coherence.mode =
        doppler_mode_from_string(coherence.at("mode").get<std::string>());
    report.coherence.method = spectral::coherence_method_from_string(
        coherence.at("method").get<std::string>());
    report.block_sparsity = j.at("block_sparsity").get<int>();
    report.condition.lhs = j.at("condition").at("lhs").get<double>();
    report.condition.satisfied =
        j.at("condition").at("satisfied").get<bool>();
    report.success_probability = j.at("success_probability").get<double>();
    report.epsilon = j.at("epsilon").get<double>();
    report.guarantee.k_max =
        j.at("guarantee").at("k_max").get<std::uint64_t>();
    report.guarantee.delta1 = j.at("guarantee").at("delta1").get<double>();
    report.guarantee.delta2 = j.at("guarantee").at("delta2").get<double>();
    report.guarantee.vacuous = j.at("guarantee").at("vacuous").get<bool>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bad analysis report: ") + e.what());
  }
  return report;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file: " + path);
  out << text;
}

}  // namespace rsfr::io
