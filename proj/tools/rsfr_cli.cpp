// rsfr: stepped-frequency dictionary analysis and sparse range-Doppler
// reconstruction.
//
// Subcommands:
//   ccdf        Monte Carlo CCDFs of the coherence statistics vs bounds
//   exact-rate  noiseless exact-recovery rates per block count
//   hit-rate    noisy hit rates over a (K, SNR) grid
//   analyze     coherence + recovery-condition report for one code draw
//   bound       evaluate the analytic bounds for given M, N, epsilon
//   recover     reconstruct a single scene file with a chosen algorithm
//
// Exit codes: 0 success, 1 invalid configuration, 2 solver non-convergence.

#include <chrono>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsfr/rsfr.hpp"

namespace {

using namespace rsfr;

struct CommonOptions {
  int n_pulses = 32;
  int n_freqs = 4;
  double freq_step = 30.0e6;
  double carrier = 9.0e9;
  double pri = 20.0e-6;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::string mode = "simplified";
  std::vector<double> rb;
  std::string algos;
  std::string k_range;
  std::string snr_range;
  std::string out;
  bool paper_scale = false;
  bool desk_scale = false;
  int scatterers = 8;
  int threads = 0;
};

RadarParams params_of(const CommonOptions& options) {
  return {options.n_pulses, options.n_freqs, options.freq_step,
          options.carrier, options.pri};
}

// "a:b" or "a:b:step" inclusive ranges, or comma-separated values
std::vector<double> parse_value_range(const std::string& text) {
  std::vector<double> values;
  const auto parse_one = [](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw CLI::ValidationError("bad number: " + s);
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == ':') {
        parts.push_back(text.substr(start, i - start));
        start = i + 1;
      }
    }
    if (parts.size() < 2 || parts.size() > 3)
      throw CLI::ValidationError("range must be first:last[:step]");
    const double first = parse_one(parts[0]);
    const double last = parse_one(parts[1]);
    const double step = parts.size() == 3 ? parse_one(parts[2]) : 1.0;
    if (!(step > 0.0)) throw CLI::ValidationError("range step must be > 0");
    for (double v = first; v <= last + 1e-9 * std::abs(step); v += step)
      values.push_back(v);
  } else {
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == ',') {
        values.push_back(parse_one(text.substr(start, i - start)));
        start = i + 1;
      }
    }
  }
  if (values.empty()) throw CLI::ValidationError("empty range");
  return values;
}

std::vector<int> parse_index_range(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_value_range(text))
    values.push_back(static_cast<int>(std::lround(v)));
  return values;
}

std::vector<experiments::Algorithm> parse_algorithms(const std::string& text) {
  std::vector<experiments::Algorithm> algorithms;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      const std::string name = text.substr(start, i - start);
      if (!name.empty())
        algorithms.push_back(experiments::algorithm_from_string(name));
      start = i + 1;
    }
  }
  if (algorithms.empty()) throw CLI::ValidationError("no algorithms given");
  return algorithms;
}

void add_waveform_flags(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--n", options.n_pulses, "pulses per CPI (N)");
  cmd->add_option("--m", options.n_freqs, "frequency grid points (M)");
  cmd->add_option("--freq-step", options.freq_step, "frequency step in Hz");
  cmd->add_option("--carrier", options.carrier, "carrier frequency in Hz");
  cmd->add_option("--pri", options.pri, "pulse repetition interval in s");
  cmd->add_option("--seed", options.seed, "base seed");
}

void add_experiment_flags(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--trials", options.trials, "Monte Carlo trials");
  cmd->add_option("--threads", options.threads,
                  "worker threads (0 = hardware)");
  cmd->add_option("--out", options.out, "output CSV path");
  auto* paper = cmd->add_flag("--paper-scale", options.paper_scale,
                              "full-scale experiment defaults");
  cmd->add_flag("--desk-scale", options.desk_scale,
                "reduced defaults (default)")
      ->excludes(paper);
}

void write_outputs(const experiments::ExperimentSpec& spec,
                   const std::vector<experiments::MetricsRow>& rows,
                   const std::string& out, double wall_seconds) {
  experiments::write_metrics_csv(out, rows);
  experiments::write_manifest(out + ".manifest.json", spec, wall_seconds);
  std::printf("wrote %s and %s.manifest.json (%.1fs)\n", out.c_str(),
              out.c_str(), wall_seconds);
}

void print_metrics(const std::vector<experiments::MetricsRow>& rows) {
  std::printf("%-14s %4s %8s %-18s %8s %7s\n", "algorithm", "K", "snr_db",
              "metric", "value", "trials");
  for (const auto& row : rows) {
    if (row.snr_db)
      std::printf("%-14s %4d %8.2f %-18s %8.4f %7d\n",
                  to_string(row.algorithm).c_str(), row.k, *row.snr_db,
                  row.metric_name.c_str(), row.value, row.trials);
    else
      std::printf("%-14s %4d %8s %-18s %8.4f %7d\n",
                  to_string(row.algorithm).c_str(), row.k, "",
                  row.metric_name.c_str(), row.value, row.trials);
  }
}

int run_ccdf(CommonOptions& options) {
  experiments::ExperimentSpec spec;
  spec.kind = experiments::ExperimentKind::Ccdf;
  spec.params = params_of(options);
  spec.trials = options.trials;
  spec.base_seed = options.seed;
  spec.threads = options.threads;
  if (options.mode == "simplified" || options.mode == "both")
    spec.modes.push_back({DopplerMode::Simplified, {}});
  if (options.mode == "exact" || options.mode == "both") {
    if (options.rb.empty())
      spec.modes.push_back({DopplerMode::Exact, {}});
    for (double rb : options.rb)
      spec.modes.push_back({DopplerMode::Exact, rb});
  }
  if (spec.modes.empty())
    throw CLI::ValidationError("mode must be simplified, exact or both");

  const auto start = std::chrono::steady_clock::now();
  const auto result = experiments::run_ccdf_experiment(spec);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const std::string out = options.out.empty() ? "ccdf.csv" : options.out;
  experiments::write_ccdf_csv(out, result);
  experiments::write_manifest(out + ".manifest.json", spec, wall);
  std::printf("wrote %s and %s.manifest.json (%.1fs)\n", out.c_str(),
              out.c_str(), wall);
  return 0;
}

int run_exact_rate(CommonOptions& options, const CLI::App* cmd) {
  experiments::ExperimentSpec spec;
  spec.kind = experiments::ExperimentKind::ExactRate;

  // desk scale halves the heaviest grid; paper scale restores it
  if (options.paper_scale) {
    if (cmd->count("--n") == 0) options.n_pulses = 128;
    if (cmd->count("--trials") == 0) options.trials = 1000;
    if (options.k_range.empty()) options.k_range = "1:12";
  } else {
    if (cmd->count("--n") == 0) options.n_pulses = 64;
    if (cmd->count("--trials") == 0) options.trials = 200;
    if (options.k_range.empty()) options.k_range = "1:8";
  }
  if (cmd->count("--m") == 0) options.n_freqs = 8;

  spec.params = params_of(options);
  spec.trials = options.trials;
  spec.base_seed = options.seed;
  spec.threads = options.threads;
  spec.scatterers_per_target = options.scatterers;
  spec.k_range = parse_index_range(options.k_range);
  spec.modes = {{doppler_mode_from_string(options.mode),
                 options.rb.empty() ? std::optional<double>{}
                                    : std::optional<double>{options.rb[0]}}};
  spec.algorithms =
      options.algos.empty()
          ? std::vector<experiments::Algorithm>{
                experiments::Algorithm::Omp, experiments::Algorithm::BlockOmp,
                experiments::Algorithm::BasisPursuit,
                experiments::Algorithm::BlockBasisPursuit}
          : parse_algorithms(options.algos);

  const auto start = std::chrono::steady_clock::now();
  const auto rows = experiments::run_exact_rate_experiment(spec);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  print_metrics(rows);
  if (!options.out.empty()) write_outputs(spec, rows, options.out, wall);
  return 0;
}

int run_hit_rate(CommonOptions& options, const CLI::App* cmd) {
  experiments::ExperimentSpec spec;
  spec.kind = experiments::ExperimentKind::HitRate;

  if (options.paper_scale) {
    if (cmd->count("--n") == 0) options.n_pulses = 128;
    if (cmd->count("--trials") == 0) options.trials = 1000;
    if (options.k_range.empty()) options.k_range = "1:12";
    if (options.snr_range.empty()) options.snr_range = "-5:20:2.5";
  } else {
    if (cmd->count("--n") == 0) options.n_pulses = 64;
    if (cmd->count("--trials") == 0) options.trials = 200;
    if (options.k_range.empty()) options.k_range = "1:6";
    if (options.snr_range.empty()) options.snr_range = "0:15:5";
  }
  if (cmd->count("--m") == 0) options.n_freqs = 8;

  spec.params = params_of(options);
  spec.trials = options.trials;
  spec.base_seed = options.seed;
  spec.threads = options.threads;
  spec.scatterers_per_target = options.scatterers;
  spec.k_range = parse_index_range(options.k_range);
  spec.snr_range_db = parse_value_range(options.snr_range);
  spec.modes = {{doppler_mode_from_string(options.mode),
                 options.rb.empty() ? std::optional<double>{}
                                    : std::optional<double>{options.rb[0]}}};
  spec.algorithms =
      options.algos.empty()
          ? std::vector<experiments::Algorithm>{experiments::Algorithm::Lasso,
                                                experiments::Algorithm::
                                                    BlockLasso}
          : parse_algorithms(options.algos);

  const auto start = std::chrono::steady_clock::now();
  const auto rows = experiments::run_hit_rate_experiment(spec);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  print_metrics(rows);
  if (!options.out.empty()) write_outputs(spec, rows, options.out, wall);
  return 0;
}

int run_analyze(const CommonOptions& options, int block_sparsity,
                double epsilon) {
  const auto report = experiments::run_analysis(
      params_of(options), options.seed,
      doppler_mode_from_string(options.mode), block_sparsity, epsilon);
  const std::string text = io::write_analysis_report(report);
  std::fputs(text.c_str(), stdout);
  if (!options.out.empty()) io::write_text_file(options.out, text);
  return 0;
}

int run_bound(const CommonOptions& options, int block_sparsity, double epsilon,
              double mu_intra, double mu_inter, double spectral_norm_value) {
  const int m = options.n_freqs;
  const int n = options.n_pulses;
  const auto guarantee = bounds::guaranteed_block_sparsity(
      m, static_cast<std::uint64_t>(n), epsilon);
  std::printf("%6s %10s %8s %12s %12s %12s %8s\n", "M", "N", "eps", "delta1",
              "delta2", "k_max", "vacuous");
  std::printf("%6d %10d %8g %12.6g %12.6g %12llu %8s\n", m, n, epsilon,
              guarantee.delta1, guarantee.delta2,
              static_cast<unsigned long long>(guarantee.k_max),
              guarantee.vacuous ? "yes" : "no");

  const double s =
      spectral_norm_value > 0.0 ? spectral_norm_value : std::sqrt(double(m));
  const auto condition = bounds::block_incoherence_condition(
      {mu_intra, mu_inter, s, block_sparsity, m, n});
  std::printf("\nincoherence condition at K=%d, mu_I=%g, mu_B=%g, |Psi|_s=%g:\n",
              block_sparsity, mu_intra, mu_inter, s);
  std::printf("  lhs = %.6g (threshold 0.25) -> %s\n", condition.lhs,
              condition.satisfied ? "satisfied" : "not satisfied");
  std::printf("  success probability >= %.9g\n",
              bounds::recovery_success_probability(
                  m, static_cast<std::uint64_t>(n)));
  return 0;
}

int run_recover(const CommonOptions& options, const std::string& scene_path,
                const std::string& algo_name, double snr_db, bool noiseless,
                std::optional<double> lambda, bool include_grid) {
  const io::SceneConfig config =
      io::read_scene_config(io::read_text_file(scene_path));
  const auto codes = draw_codes(config.params, options.seed);
  const auto matrix = build_observation_matrix(
      config.params, codes, doppler_mode_from_string(options.mode));
  const auto x = scene_to_vector(config.scene, config.params);
  const double noise_power = noiseless ? 0.0 : snr_to_noise_power(snr_db);
  const auto measurement =
      synthesize_measurement(matrix, x, noise_power, options.seed);

  recovery::SolverConfig solver;
  solver.lambda = lambda;
  recovery::RecoveryResult result;
  const auto algorithm = experiments::algorithm_from_string(algo_name);
  switch (algorithm) {
    case experiments::Algorithm::MatchedFilter:
      result = recovery::matched_filter(matrix, measurement.samples);
      break;
    case experiments::Algorithm::Omp:
      result = recovery::omp(matrix, measurement.samples,
                             config.scene.total_scatterers());
      break;
    case experiments::Algorithm::BlockOmp:
      result = recovery::block_omp(matrix, measurement.samples,
                                   static_cast<int>(config.scene.targets.size()));
      break;
    case experiments::Algorithm::Lasso:
      result = recovery::lasso_solve(matrix, measurement.samples, solver);
      break;
    case experiments::Algorithm::BlockLasso:
      result = recovery::block_lasso_solve(matrix, measurement.samples, solver);
      break;
    case experiments::Algorithm::BasisPursuit:
      result =
          recovery::basis_pursuit_solve(matrix, measurement.samples, solver);
      break;
    case experiments::Algorithm::BlockBasisPursuit:
      result = recovery::basis_pursuit_solve(matrix, measurement.samples,
                                             solver, true);
      break;
  }

  const std::string text = io::write_recovery_result(
      result, config.params.n_freqs, include_grid);
  if (options.out.empty())
    std::fputs(text.c_str(), stdout);
  else
    io::write_text_file(options.out, text);

  if (!result.converged) {
    std::fprintf(stderr, "solver did not converge: %s\n",
                 result.diagnostic.c_str());
    return 2;
  }
  std::fprintf(stderr, "recovered %zu entries in %zu blocks, residual %.3e\n",
               result.support.size(), result.block_support.size(),
               result.residual_norm);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stepped-frequency dictionary analysis and block-sparse "
               "range-Doppler reconstruction"};
  app.require_subcommand(1);

  CommonOptions options;

  auto* ccdf = app.add_subcommand(
      "ccdf", "Monte Carlo CCDFs of mu_I, mu_B and the spectral norm");
  add_waveform_flags(ccdf, options);
  add_experiment_flags(ccdf, options);
  ccdf->add_option("--mode", options.mode, "simplified | exact | both");
  ccdf->add_option("--rb", options.rb,
                   "relative bandwidths for exact mode (repeatable)");
  options.mode = "both";
  options.rb = {0.01, 0.1};

  auto* exact_rate = app.add_subcommand(
      "exact-rate", "noiseless exact-recovery rates per block count");
  CommonOptions exact_options;
  exact_options.mode = "exact";
  add_waveform_flags(exact_rate, exact_options);
  add_experiment_flags(exact_rate, exact_options);
  exact_rate->add_option("--mode", exact_options.mode, "simplified | exact");
  exact_rate->add_option("--rb", exact_options.rb,
                         "relative bandwidth override for exact mode");
  exact_rate->add_option("--k-range", exact_options.k_range,
                         "block counts, e.g. 1:8 or 1,2,4");
  exact_rate->add_option("--algos", exact_options.algos,
                         "comma list: omp,block-omp,bp,block-bp");
  exact_rate->add_option("--scatterers", exact_options.scatterers,
                         "scatterers per target (P)");

  auto* hit_rate = app.add_subcommand(
      "hit-rate", "noisy hit rates over a (K, SNR) grid");
  CommonOptions hit_options;
  hit_options.mode = "exact";
  add_waveform_flags(hit_rate, hit_options);
  add_experiment_flags(hit_rate, hit_options);
  hit_rate->add_option("--mode", hit_options.mode, "simplified | exact");
  hit_rate->add_option("--rb", hit_options.rb,
                       "relative bandwidth override for exact mode");
  hit_rate->add_option("--k-range", hit_options.k_range, "block counts");
  hit_rate->add_option("--snr-range", hit_options.snr_range,
                       "SNR grid in dB, e.g. 0:15:5");
  hit_rate->add_option("--algos", hit_options.algos,
                       "comma list: lasso,block-lasso,omp,block-omp");
  hit_rate->add_option("--scatterers", hit_options.scatterers,
                       "scatterers per target (P)");

  auto* analyze = app.add_subcommand(
      "analyze", "coherence and recovery-condition report for one draw");
  CommonOptions analyze_options;
  int analyze_k = 1;
  double analyze_eps = 0.1;
  add_waveform_flags(analyze, analyze_options);
  analyze->add_option("--mode", analyze_options.mode, "simplified | exact");
  analyze->add_option("--k", analyze_k, "block sparsity for the condition");
  analyze->add_option("--epsilon", analyze_eps,
                      "failure probability for the sparsity guarantee");
  analyze->add_option("--out", analyze_options.out, "also write JSON here");

  auto* bound = app.add_subcommand(
      "bound", "evaluate the analytic bounds for given M, N, epsilon");
  CommonOptions bound_options;
  int bound_k = 1;
  double bound_eps = 0.1;
  double bound_mu_intra = 0.0;
  double bound_mu_inter = 0.0;
  double bound_snorm = 0.0;
  bound->add_option("--n", bound_options.n_pulses, "pulses per CPI (N)");
  bound->add_option("--m", bound_options.n_freqs, "frequency points (M)");
  bound->add_option("--epsilon", bound_eps, "failure probability");
  bound->add_option("--k", bound_k, "block sparsity for the condition");
  bound->add_option("--mu-intra", bound_mu_intra, "intra-block coherence");
  bound->add_option("--mu-inter", bound_mu_inter, "inter-block coherence");
  bound->add_option("--spectral-norm", bound_snorm,
                    "dictionary spectral norm (default sqrt(M))");

  auto* recover = app.add_subcommand(
      "recover", "reconstruct a single scene file");
  CommonOptions recover_options;
  std::string scene_path;
  std::string recover_algo = "block-lasso";
  double recover_snr = 10.0;
  bool recover_noiseless = false;
  double recover_lambda = 0.0;
  bool no_grid = false;
  recover->add_option("--scene", scene_path, "scene config JSON")->required();
  recover->add_option("--algo", recover_algo,
                      "matched-filter | omp | block-omp | lasso | "
                      "block-lasso | bp | block-bp");
  recover->add_option("--snr", recover_snr, "SNR in dB");
  recover->add_flag("--noiseless", recover_noiseless, "disable noise");
  recover->add_option("--lambda", recover_lambda,
                      "regularization weight (0 = automatic)");
  recover->add_option("--seed", recover_options.seed, "noise/code seed");
  recover->add_option("--mode", recover_options.mode, "simplified | exact");
  recover->add_option("--out", recover_options.out, "output JSON path");
  recover->add_flag("--no-grid", no_grid, "omit the magnitude grid");
  recover_options.mode = "exact";

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(ccdf)) return run_ccdf(options);
    if (app.got_subcommand(exact_rate))
      return run_exact_rate(exact_options, exact_rate);
    if (app.got_subcommand(hit_rate)) return run_hit_rate(hit_options, hit_rate);
    if (app.got_subcommand(analyze))
      return run_analyze(analyze_options, analyze_k, analyze_eps);
    if (app.got_subcommand(bound))
      return run_bound(bound_options, bound_k, bound_eps, bound_mu_intra,
                       bound_mu_inter, bound_snorm);
    if (app.got_subcommand(recover))
      return run_recover(recover_options, scene_path, recover_algo,
                         recover_snr, recover_noiseless,
                         recover_lambda > 0.0
                             ? std::optional<double>(recover_lambda)
                             : std::nullopt,
                         !no_grid);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
