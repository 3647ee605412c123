#include "rsfr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "rsfr/target_scene.hpp"
#include "rsfr/version.hpp"

namespace rsfr::experiments {

namespace {

using nlohmann::json;

// Trials are claimed from a shared counter; every result lands in a
// per-trial slot and aggregation runs sequentially afterwards, so the
// output does not depend on the schedule.
void for_each_trial(int trials, int threads,
                    const std::function<void(int)>& body) {
  int n_workers =
      threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::clamp(n_workers, 1, std::max(1, trials));
  if (n_workers == 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= trials) return;
        try {
          body(t);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (error) std::rethrow_exception(error);
}

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

double mean_over_trials(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::MatchedFilter: return "matched-filter";
    case Algorithm::Omp: return "omp";
    case Algorithm::BlockOmp: return "block-omp";
    case Algorithm::Lasso: return "lasso";
    case Algorithm::BlockLasso: return "block-lasso";
    case Algorithm::BasisPursuit: return "bp";
    case Algorithm::BlockBasisPursuit: return "block-bp";
  }
  throw std::invalid_argument("unknown algorithm");
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "matched-filter") return Algorithm::MatchedFilter;
  if (name == "omp") return Algorithm::Omp;
  if (name == "block-omp") return Algorithm::BlockOmp;
  if (name == "lasso") return Algorithm::Lasso;
  if (name == "block-lasso") return Algorithm::BlockLasso;
  if (name == "bp") return Algorithm::BasisPursuit;
  if (name == "block-bp") return Algorithm::BlockBasisPursuit;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string ModeSpec::label() const {
  if (mode == DopplerMode::Simplified) return "simplified";
  if (relative_bandwidth) return "rb=" + format_double(*relative_bandwidth);
  return "exact";
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Ccdf: return "ccdf";
    case ExperimentKind::ExactRate: return "exact-rate";
    case ExperimentKind::HitRate: return "hit-rate";
    case ExperimentKind::Analyze: return "analyze";
    case ExperimentKind::Bound: return "bound";
  }
  throw std::invalid_argument("unknown experiment kind");
}

void ExperimentSpec::validate() const {
  params.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  for (const auto& mode : modes) {
    if (mode.relative_bandwidth && mode.mode != DopplerMode::Exact)
      throw std::invalid_argument(
          "relative-bandwidth override requires Exact mode");
  }
  for (int k : k_range) {
    if (k < 0 || k > params.n_pulses)
      throw std::invalid_argument("block counts must lie in [0, N]");
  }
  if (kind == ExperimentKind::ExactRate || kind == ExperimentKind::HitRate) {
    if (scatterers_per_target < 1 || scatterers_per_target > params.n_freqs)
      throw std::invalid_argument("scatterers_per_target must be in [1, M]");
    if (k_range.empty()) throw std::invalid_argument("k_range is empty");
    for (Algorithm a : algorithms) {
      const bool greedy = a == Algorithm::Omp || a == Algorithm::BlockOmp;
      const bool pursuit = a == Algorithm::BasisPursuit ||
                           a == Algorithm::BlockBasisPursuit;
      const bool shrinkage =
          a == Algorithm::Lasso || a == Algorithm::BlockLasso;
      if (kind == ExperimentKind::ExactRate && !(greedy || pursuit))
        throw std::invalid_argument(
            "exact-rate supports omp, block-omp, bp, block-bp");
      if (kind == ExperimentKind::HitRate &&
          !(greedy || shrinkage || a == Algorithm::MatchedFilter))
        throw std::invalid_argument(
            "hit-rate supports omp, block-omp, lasso, block-lasso, "
            "matched-filter");
    }
    if (algorithms.empty()) throw std::invalid_argument("no algorithms");
    // greedy entry selection cannot exceed the measurement count
    const int k_top = *std::max_element(k_range.begin(), k_range.end());
    if (std::find(algorithms.begin(), algorithms.end(), Algorithm::Omp) !=
            algorithms.end() &&
        k_top * scatterers_per_target > params.n_pulses)
      throw std::invalid_argument("omp needs K*P <= N");
  }
  if (kind == ExperimentKind::HitRate) {
    if (snr_range_db.empty()) throw std::invalid_argument("snr_range is empty");
    for (int k : k_range)
      if (k < 1)
        throw std::invalid_argument("hit-rate needs K >= 1 (nonempty truth)");
  }
}

double exact_recovery_metric(std::span<const int> estimated,
                             std::span<const int> truth) {
  return std::ranges::equal(estimated, truth) ? 1.0 : 0.0;
}

double hit_rate_metric(std::span<const int> estimated,
                       std::span<const int> truth) {
  if (truth.empty())
    throw std::invalid_argument("hit rate needs a nonempty truth support");
  std::size_t hits = 0;
  std::size_t i = 0;
  for (int t : truth) {  // both ascending
    while (i < estimated.size() && estimated[i] < t) ++i;
    if (i < estimated.size() && estimated[i] == t) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

namespace {

struct ModeSamples {
  std::vector<double> mu_intra;
  std::vector<double> mu_inter;
  std::vector<double> spectral_norm;
};

void append_ccdf_series(CcdfResult& result, const std::string& quantity,
                        const std::string& mode_label,
                        const std::vector<double>& samples, int n_freqs,
                        int n_pulses) {
  const double top = *std::max_element(samples.begin(), samples.end());
  const int grid_points = 200;
  for (int i = 0; i < grid_points; ++i) {
    CcdfPoint point;
    point.quantity = quantity;
    point.mode_label = mode_label;
    point.threshold = top * 1.1 * i / (grid_points - 1);
    std::size_t above = 0;
    for (double s : samples)
      if (s > point.threshold) ++above;
    point.empirical = static_cast<double>(above) / samples.size();
    if (n_freqs >= 2) {
      if (quantity == "mu_intra")
        point.bound =
            bounds::intra_coherence_ccdf_bound(point.threshold, n_freqs, n_pulses)
                .value;
      else if (quantity == "mu_inter")
        point.bound =
            bounds::inter_coherence_ccdf_bound(point.threshold, n_freqs, n_pulses)
                .value;
    }
    result.points.push_back(std::move(point));
  }
  result.samples[quantity + "/" + mode_label] = samples;
}

}  // namespace

CcdfResult run_ccdf_experiment(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::Ccdf)
    throw std::invalid_argument("spec.kind must be Ccdf");
  spec.validate();

  std::vector<ModeSpec> modes = spec.modes;
  if (modes.empty()) modes.push_back({DopplerMode::Simplified, {}});

  CcdfResult result;
  for (const auto& mode : modes) {
    const RadarParams params =
        mode.relative_bandwidth
            ? with_relative_bandwidth(spec.params, *mode.relative_bandwidth)
            : spec.params;
    ModeSamples samples;
    samples.mu_intra.resize(static_cast<std::size_t>(spec.trials));
    samples.mu_inter.resize(static_cast<std::size_t>(spec.trials));
    samples.spectral_norm.resize(static_cast<std::size_t>(spec.trials));

    for_each_trial(spec.trials, spec.threads, [&](int t) {
      const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(t);
      const FrequencyCodes codes = draw_codes(params, seed);
      const auto slot = static_cast<std::size_t>(t);
      if (mode.mode == DopplerMode::Simplified) {
        samples.mu_intra[slot] =
            spectral::intra_block_coherence_closed_form(codes, params.n_freqs);
        samples.mu_inter[slot] =
            spectral::inter_block_coherence_closed_form(codes, params.n_freqs);
        samples.spectral_norm[slot] =
            std::sqrt(static_cast<double>(params.n_freqs));
      } else {
        const ObservationMatrix matrix =
            build_observation_matrix(params, codes, DopplerMode::Exact);
        samples.mu_intra[slot] = spectral::intra_block_coherence_numeric(matrix);
        samples.mu_inter[slot] = spectral::inter_block_coherence_numeric(matrix);
        samples.spectral_norm[slot] = spectral::spectral_norm_numeric(matrix);
      }
    });

    const std::string label = mode.label();
    append_ccdf_series(result, "mu_intra", label, samples.mu_intra,
                       params.n_freqs, params.n_pulses);
    append_ccdf_series(result, "mu_inter", label, samples.mu_inter,
                       params.n_freqs, params.n_pulses);
    append_ccdf_series(result, "spectral_norm", label, samples.spectral_norm,
                       params.n_freqs, params.n_pulses);
  }
  return result;
}

namespace {

std::vector<int> recover_support_or_throw(Algorithm algorithm,
                                          const ObservationMatrix& matrix,
                                          const Eigen::VectorXcd& y, int k,
                                          int p,
                                          const recovery::SolverConfig& solver) {
  switch (algorithm) {
    case Algorithm::Omp:
      return recovery::omp(matrix, y, k * p).support;
    case Algorithm::BlockOmp:
      return recovery::block_omp(matrix, y, k).support;
    case Algorithm::BasisPursuit:
      return recovery::basis_pursuit_solve(matrix, y, solver, false).support;
    case Algorithm::BlockBasisPursuit:
      return recovery::basis_pursuit_solve(matrix, y, solver, true).support;
    case Algorithm::Lasso:
      return recovery::extract_support_topk(
          recovery::lasso_solve(matrix, y, solver).estimate, k * p);
    case Algorithm::BlockLasso:
      return recovery::extract_support_topk(
          recovery::block_lasso_solve(matrix, y, solver).estimate, k * p);
    case Algorithm::MatchedFilter:
      return recovery::extract_support_topk(
          recovery::matched_filter(matrix, y).estimate, k * p);
  }
  throw std::invalid_argument("unknown algorithm");
}

// a solver abort (e.g. a rank-deficient greedy refit at K*M = N) is a
// failed recovery for that trial, not a failure of the experiment
std::vector<int> recover_support(Algorithm algorithm,
                                 const ObservationMatrix& matrix,
                                 const Eigen::VectorXcd& y, int k, int p,
                                 const recovery::SolverConfig& solver) {
  try {
    return recover_support_or_throw(algorithm, matrix, y, k, p, solver);
  } catch (const std::runtime_error&) {
    return {};
  }
}

DopplerMode recovery_mode(const ExperimentSpec& spec, RadarParams& params) {
  if (spec.modes.empty()) return DopplerMode::Exact;
  const ModeSpec& mode = spec.modes.front();
  if (mode.relative_bandwidth)
    params = with_relative_bandwidth(params, *mode.relative_bandwidth);
  return mode.mode;
}

}  // namespace

std::vector<MetricsRow> run_exact_rate_experiment(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::ExactRate)
    throw std::invalid_argument("spec.kind must be ExactRate");
  spec.validate();

  RadarParams params = spec.params;
  const DopplerMode mode = recovery_mode(spec, params);
  const int p = spec.scatterers_per_target;
  const std::size_t n_algos = spec.algorithms.size();

  std::vector<MetricsRow> rows;
  for (int k : spec.k_range) {
    std::vector<std::vector<double>> outcome(
        n_algos, std::vector<double>(static_cast<std::size_t>(spec.trials)));
    for_each_trial(spec.trials, spec.threads, [&](int t) {
      const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(t);
      if (k == 0) {  // empty support is trivially recovered
        for (std::size_t a = 0; a < n_algos; ++a)
          outcome[a][static_cast<std::size_t>(t)] = 1.0;
        return;
      }
      const FrequencyCodes codes = draw_codes(params, seed);
      const ObservationMatrix matrix =
          build_observation_matrix(params, codes, mode);
      const TargetScene scene = synthesize_scene(params, k, p, seed);
      const BlockSparseVector x = scene_to_vector(scene, params);
      const Eigen::VectorXcd y = matrix.entries() * x.values;
      const std::vector<int> truth = x.support();
      for (std::size_t a = 0; a < n_algos; ++a) {
        const std::vector<int> estimate = recover_support(
            spec.algorithms[a], matrix, y, k, p, spec.solver);
        outcome[a][static_cast<std::size_t>(t)] =
            exact_recovery_metric(estimate, truth);
      }
    });
    for (std::size_t a = 0; a < n_algos; ++a) {
      MetricsRow row;
      row.algorithm = spec.algorithms[a];
      row.k = k;
      row.metric_name = "ExactRecoveryRate";
      row.value = mean_over_trials(outcome[a]);
      row.trials = spec.trials;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<MetricsRow> run_hit_rate_experiment(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::HitRate)
    throw std::invalid_argument("spec.kind must be HitRate");
  spec.validate();

  RadarParams params = spec.params;
  const DopplerMode mode = recovery_mode(spec, params);
  const int p = spec.scatterers_per_target;
  const std::size_t n_algos = spec.algorithms.size();

  std::vector<MetricsRow> rows;
  for (int k : spec.k_range) {
    for (double snr_db : spec.snr_range_db) {
      const double noise_power = snr_to_noise_power(snr_db);
      std::vector<std::vector<double>> outcome(
          n_algos, std::vector<double>(static_cast<std::size_t>(spec.trials)));
      for_each_trial(spec.trials, spec.threads, [&](int t) {
        const std::uint64_t seed =
            spec.base_seed + static_cast<std::uint64_t>(t);
        const FrequencyCodes codes = draw_codes(params, seed);
        const ObservationMatrix matrix =
            build_observation_matrix(params, codes, mode);
        const TargetScene scene = synthesize_scene(params, k, p, seed);
        const BlockSparseVector x = scene_to_vector(scene, params);
        const Measurement measurement =
            synthesize_measurement(matrix, x, noise_power, seed);
        const std::vector<int> truth = x.support();
        for (std::size_t a = 0; a < n_algos; ++a) {
          const std::vector<int> estimate =
              recover_support(spec.algorithms[a], matrix, measurement.samples,
                              k, p, spec.solver);
          outcome[a][static_cast<std::size_t>(t)] =
              hit_rate_metric(estimate, truth);
        }
      });
      for (std::size_t a = 0; a < n_algos; ++a) {
        MetricsRow row;
        row.algorithm = spec.algorithms[a];
        row.k = k;
        row.snr_db = snr_db;
        row.metric_name = "HitRate";
        row.value = mean_over_trials(outcome[a]);
        row.trials = spec.trials;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

AnalysisReport run_analysis(const RadarParams& params, std::uint64_t seed,
                            DopplerMode mode, int block_sparsity,
                            double epsilon) {
  params.validate();
  AnalysisReport report;
  const FrequencyCodes codes = draw_codes(params, seed);
  if (mode == DopplerMode::Simplified) {
    report.coherence.mu_intra =
        spectral::intra_block_coherence_closed_form(codes, params.n_freqs);
    report.coherence.mu_inter =
        spectral::inter_block_coherence_closed_form(codes, params.n_freqs);
    report.coherence.spectral_norm =
        std::sqrt(static_cast<double>(params.n_freqs));
    report.coherence.mode = DopplerMode::Simplified;
    report.coherence.method = spectral::CoherenceMethod::ClosedForm;
  } else {
    const ObservationMatrix matrix =
        build_observation_matrix(params, codes, DopplerMode::Exact);
    report.coherence =
        spectral::coherence_report(matrix, spectral::CoherenceMethod::NumericSvd);
  }
  report.block_sparsity = block_sparsity;
  report.condition = bounds::block_incoherence_condition(
      {report.coherence.mu_intra, report.coherence.mu_inter,
       report.coherence.spectral_norm, block_sparsity, params.n_freqs,
       params.n_pulses});
  report.success_probability = bounds::recovery_success_probability(
      params.n_freqs, static_cast<std::uint64_t>(params.n_pulses));
  report.epsilon = epsilon;
  report.guarantee = bounds::guaranteed_block_sparsity(
      params.n_freqs, static_cast<std::uint64_t>(params.n_pulses), epsilon);
  return report;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsRow>& rows) {
  auto out = open_output(path);
  out << "algorithm,k,snr_db,metric,value,trials\n";
  for (const auto& row : rows) {
    out << to_string(row.algorithm) << ',' << row.k << ',';
    if (row.snr_db) out << format_double(*row.snr_db);
    out << ',' << row.metric_name << ',' << format_double(row.value) << ','
        << row.trials << '\n';
  }
}

void write_ccdf_csv(const std::string& path, const CcdfResult& result) {
  auto out = open_output(path);
  out << "quantity,mode,threshold,empirical_ccdf,analytic_bound\n";
  for (const auto& point : result.points) {
    out << point.quantity << ',' << point.mode_label << ','
        << format_double(point.threshold) << ','
        << format_double(point.empirical) << ',';
    if (point.bound) out << format_double(*point.bound);
    out << '\n';
  }
}

void write_manifest(const std::string& path, const ExperimentSpec& spec,
                    double wall_seconds) {
  json manifest;
  manifest["kind"] = to_string(spec.kind);
  manifest["params"] = {{"n_pulses", spec.params.n_pulses},
                        {"n_freqs", spec.params.n_freqs},
                        {"freq_step", spec.params.freq_step},
                        {"carrier", spec.params.carrier},
                        {"pri", spec.params.pri}};
  json modes = json::array();
  for (const auto& mode : spec.modes) {
    json entry;
    entry["mode"] = to_string(mode.mode);
    if (mode.relative_bandwidth)
      entry["relative_bandwidth"] = *mode.relative_bandwidth;
    modes.push_back(entry);
  }
  manifest["modes"] = modes;
  manifest["trials"] = spec.trials;
  manifest["k_range"] = spec.k_range;
  manifest["snr_range_db"] = spec.snr_range_db;
  manifest["base_seed"] = spec.base_seed;
  json algorithms = json::array();
  for (Algorithm a : spec.algorithms) algorithms.push_back(to_string(a));
  manifest["algorithms"] = algorithms;
  manifest["scatterers_per_target"] = spec.scatterers_per_target;
  manifest["library_version"] = version_string;
  manifest["wall_time_seconds"] = wall_seconds;

  auto out = open_output(path);
  out << manifest.dump(2) << '\n';
}

}  // namespace rsfr::experiments
