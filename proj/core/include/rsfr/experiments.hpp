#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsfr/bounds.hpp"
#include "rsfr/radar_params.hpp"
#include "rsfr/recovery.hpp"
#include "rsfr/spectral.hpp"

namespace rsfr::experiments {

enum class Algorithm {
  MatchedFilter,
  Omp,
  BlockOmp,
  Lasso,
  BlockLasso,
  BasisPursuit,
  BlockBasisPursuit,
};

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

/// One dictionary model to simulate: Simplified, or Exact with the
/// carrier optionally re-derived from a relative bandwidth.
struct ModeSpec {
  DopplerMode mode = DopplerMode::Simplified;
  std::optional<double> relative_bandwidth;

  std::string label() const;
};

enum class ExperimentKind { Ccdf, ExactRate, HitRate, Analyze, Bound };

std::string to_string(ExperimentKind kind);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Ccdf;
  RadarParams params;
  std::vector<ModeSpec> modes;
  int trials = 1000;
  std::vector<int> k_range;
  std::vector<double> snr_range_db;
  std::uint64_t base_seed = 1;
  std::vector<Algorithm> algorithms;
  int scatterers_per_target = 8;
  /// Worker threads for the trial loop; 0 picks the hardware count.
  /// Results are identical for any thread count.
  int threads = 0;
  recovery::SolverConfig solver;

  void validate() const;
};

struct MetricsRow {
  Algorithm algorithm = Algorithm::Omp;
  int k = 0;
  std::optional<double> snr_db;
  std::string metric_name;
  double value = 0.0;
  int trials = 0;
};

/// 1 if the recovered index set matches the truth exactly, else 0.
/// Both sets ascending.
double exact_recovery_metric(std::span<const int> estimated,
                             std::span<const int> truth);

/// |estimated intersect truth| / |truth|; throws on empty truth.
double hit_rate_metric(std::span<const int> estimated,
                       std::span<const int> truth);

struct CcdfPoint {
  std::string quantity;    ///< mu_intra | mu_inter | spectral_norm
  std::string mode_label;
  double threshold = 0.0;
  double empirical = 0.0;              ///< fraction of trials above threshold
  std::optional<double> bound;         ///< analytic curve where one exists
};

struct CcdfResult {
  std::vector<CcdfPoint> points;
  /// Raw per-trial samples keyed "quantity/mode_label", trial order.
  std::map<std::string, std::vector<double>> samples;
};

/// Per trial draws fresh codes and evaluates mu_intra, mu_inter and the
/// spectral norm in every requested mode (closed form in Simplified,
/// numeric in Exact), then tabulates empirical CCDFs on a 200-point grid
/// over [0, observed max * 1.1] against the analytic bound curves.
CcdfResult run_ccdf_experiment(const ExperimentSpec& spec);

/// Noiseless exact-support-recovery rates per (algorithm, K). Greedy
/// solvers receive the true counts (sparsity K*P, block sparsity K);
/// basis-pursuit supports use the magnitude cutoff from spec.solver.
std::vector<MetricsRow> run_exact_rate_experiment(const ExperimentSpec& spec);

/// Mean hit rate per (algorithm, K, SNR) cell. Lasso and Block-Lasso
/// supports are the K*P largest magnitudes of the estimate; greedy
/// solvers use their selected supports.
std::vector<MetricsRow> run_hit_rate_experiment(const ExperimentSpec& spec);

struct AnalysisReport {
  spectral::CoherenceReport coherence;
  int block_sparsity = 0;
  bounds::ConditionResult condition;
  double success_probability = 0.0;
  double epsilon = 0.0;
  bounds::SparsityGuarantee guarantee;
};

/// One-shot report for a single code draw: coherence summary plus the
/// recovery-condition and sparsity-guarantee evaluations.
AnalysisReport run_analysis(const RadarParams& params, std::uint64_t seed,
                            DopplerMode mode, int block_sparsity,
                            double epsilon);

/// CSV writers: header row, UTF-8, '.' decimal separator, one point or
/// metrics row per line. Missing optional fields stay empty.
void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsRow>& rows);
void write_ccdf_csv(const std::string& path, const CcdfResult& result);

/// JSON run manifest: spec echo, library version, wall time.
void write_manifest(const std::string& path, const ExperimentSpec& spec,
                    double wall_seconds);

}  // namespace rsfr::experiments
