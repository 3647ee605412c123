#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rsfr/experiments.hpp"
#include "rsfr/serialization.hpp"

using namespace rsfr;
using namespace rsfr::experiments;

namespace {

RadarParams make_params(int n, int m) { return {n, m, 30.0e6, 9.0e9, 20.0e-6}; }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

double grid_mean(const std::vector<MetricsRow>& rows, Algorithm algorithm) {
  double sum = 0.0;
  int count = 0;
  for (const auto& row : rows) {
    if (row.algorithm != algorithm) continue;
    sum += row.value;
    ++count;
  }
  REQUIRE(count > 0);
  return sum / count;
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("metrics: exact recovery") {
  const std::vector<int> truth{1, 4, 9};
  CHECK(exact_recovery_metric(truth, truth) == 1.0);
  const std::vector<int> superset{1, 4, 7, 9};
  CHECK(exact_recovery_metric(superset, truth) == 0.0);
  CHECK(exact_recovery_metric({}, {}) == 1.0);
}

TEST_CASE("metrics: hit rate") {
  const std::vector<int> truth{0, 1, 2, 3, 4, 5, 6, 7};
  const std::vector<int> disjoint{8, 9};
  CHECK(hit_rate_metric(disjoint, truth) == 0.0);
  CHECK(hit_rate_metric(truth, truth) == 1.0);
  const std::vector<int> half{0, 1, 2, 3, 10, 11, 12, 13};
  CHECK(hit_rate_metric(half, truth) == 0.5);
  CHECK_THROWS_AS(hit_rate_metric(truth, {}), std::invalid_argument);
}

TEST_CASE("spec validation") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::HitRate;
  spec.params = make_params(32, 4);
  spec.trials = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec.trials = 1;
  spec.k_range = {0};
  spec.snr_range_db = {10.0};
  spec.algorithms = {Algorithm::Lasso};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // K=0 in hit-rate

  spec.k_range = {9};
  spec.scatterers_per_target = 4;
  spec.algorithms = {Algorithm::Omp};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // K*P > N

  spec.kind = ExperimentKind::ExactRate;
  spec.k_range = {1};
  spec.algorithms = {Algorithm::Lasso};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // lasso is noisy-only

  spec.algorithms = {Algorithm::BlockOmp};
  spec.modes = {{DopplerMode::Simplified, 0.1}};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // rb needs Exact
}

TEST_CASE("ccdf experiment: step at sqrt(M) and bound domination") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::Ccdf;
  spec.params = make_params(32, 4);
  spec.modes = {{DopplerMode::Simplified, {}}};
  spec.trials = 200;
  spec.base_seed = 7;

  const auto result = run_ccdf_experiment(spec);

  const auto& norms = result.samples.at("spectral_norm/simplified");
  REQUIRE(norms.size() == 200);
  for (double s : norms) CHECK(s == 2.0);  // all mass at sqrt(M), exactly

  double previous = 2.0;
  bool saw_intra = false;
  for (const auto& point : result.points) {
    CHECK(point.empirical >= 0.0);
    CHECK(point.empirical <= 1.0);
    if (point.quantity == "mu_intra" || point.quantity == "mu_inter") {
      REQUIRE(point.bound.has_value());
      CHECK(point.empirical <= *point.bound);
    } else {
      CHECK_FALSE(point.bound.has_value());
    }
    if (point.quantity == "mu_intra") {
      if (saw_intra) CHECK(point.empirical <= previous);  // CCDF nonincreasing
      previous = point.empirical;
      saw_intra = true;
    }
  }
}

TEST_CASE("ccdf experiment: single trial is an indicator step") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::Ccdf;
  spec.params = make_params(16, 2);
  spec.modes = {{DopplerMode::Simplified, {}}};
  spec.trials = 1;
  const auto result = run_ccdf_experiment(spec);
  for (const auto& point : result.points)
    CHECK((point.empirical == 0.0 || point.empirical == 1.0));
}

TEST_CASE("ccdf experiment: exact mode with relative-bandwidth override") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::Ccdf;
  spec.params = make_params(16, 2);
  spec.modes = {{DopplerMode::Exact, 0.1}, {DopplerMode::Exact, 0.01}};
  spec.trials = 3;
  const auto result = run_ccdf_experiment(spec);
  CHECK(result.samples.count("mu_intra/rb=0.1") == 1);
  CHECK(result.samples.count("spectral_norm/rb=0.01") == 1);
  // rank <= N and unit columns force ||Psi||_s >= sqrt(M) in any mode;
  // a finite relative bandwidth can only push it upward
  for (const auto& key : {"spectral_norm/rb=0.1", "spectral_norm/rb=0.01"}) {
    for (double s : result.samples.at(key)) {
      CHECK(s >= std::sqrt(2.0) - 1e-9);
      CHECK(s < 2.0);
    }
  }
}

TEST_CASE("exact-rate experiment: empty scenes are trivially recovered") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::ExactRate;
  spec.params = make_params(16, 2);
  spec.scatterers_per_target = 2;
  spec.trials = 5;
  spec.k_range = {0};
  spec.algorithms = {Algorithm::Omp, Algorithm::BlockOmp};
  const auto rows = run_exact_rate_experiment(spec);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.value == 1.0);
    CHECK(row.metric_name == "ExactRecoveryRate");
    CHECK_FALSE(row.snr_db.has_value());
    CHECK(row.trials == 5);
  }
}

TEST_CASE("exact-rate experiment: block methods dominate their counterparts") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::ExactRate;
  spec.params = make_params(32, 4);
  spec.scatterers_per_target = 4;
  spec.trials = 50;
  spec.k_range = {1, 2, 3};
  spec.base_seed = 11;
  spec.algorithms = {Algorithm::Omp, Algorithm::BlockOmp,
                     Algorithm::BasisPursuit, Algorithm::BlockBasisPursuit};
  const auto rows = run_exact_rate_experiment(spec);
  REQUIRE(rows.size() == 12);

  const auto rate = [&](Algorithm a, int k) {
    for (const auto& row : rows)
      if (row.algorithm == a && row.k == k) return row.value;
    REQUIRE(false);
    return 0.0;
  };
  for (int k : {1, 2, 3}) {
    const auto slack = [&](double p1, double p2) {
      return 2.0 * std::sqrt((p1 * (1 - p1) + p2 * (1 - p2)) / 50.0) + 1e-12;
    };
    const double omp_rate = rate(Algorithm::Omp, k);
    const double bomp_rate = rate(Algorithm::BlockOmp, k);
    CHECK(bomp_rate >= omp_rate - slack(omp_rate, bomp_rate));
    const double bp_rate = rate(Algorithm::BasisPursuit, k);
    const double bbp_rate = rate(Algorithm::BlockBasisPursuit, k);
    CHECK(bbp_rate >= bp_rate - slack(bp_rate, bbp_rate));
  }
}

TEST_CASE("exact-rate experiment: block pursuit saturates at K = 1, paper scale") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::ExactRate;
  spec.params = make_params(128, 8);
  spec.scatterers_per_target = 8;
  spec.trials = 200;
  spec.k_range = {1};
  spec.base_seed = 1;
  spec.algorithms = {Algorithm::BlockOmp};
  const auto rows = run_exact_rate_experiment(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value >= 0.99);
}

TEST_CASE("experiments are reproducible across thread counts") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::ExactRate;
  spec.params = make_params(32, 4);
  spec.scatterers_per_target = 4;
  spec.trials = 20;
  spec.k_range = {1, 2};
  spec.base_seed = 3;
  spec.algorithms = {Algorithm::Omp, Algorithm::BlockOmp};

  spec.threads = 1;
  const auto serial = run_exact_rate_experiment(spec);
  spec.threads = 3;
  const auto threaded = run_exact_rate_experiment(spec);
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].value == threaded[i].value);  // bit-identical
    CHECK(serial[i].k == threaded[i].k);
  }
}

TEST_CASE("hit-rate experiment: reproducible across thread counts") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::HitRate;
  spec.params = make_params(16, 2);
  spec.scatterers_per_target = 2;
  spec.trials = 12;
  spec.k_range = {1, 2};
  spec.snr_range_db = {5.0};
  spec.base_seed = 21;
  spec.algorithms = {Algorithm::Lasso, Algorithm::BlockLasso};

  spec.threads = 1;
  const auto serial = run_hit_rate_experiment(spec);
  spec.threads = 4;
  const auto threaded = run_hit_rate_experiment(spec);
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i)
    CHECK(serial[i].value == threaded[i].value);
}

TEST_CASE("hit-rate experiment: high SNR approaches the noiseless limit") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::HitRate;
  spec.params = make_params(32, 4);
  spec.scatterers_per_target = 4;
  spec.trials = 30;
  spec.k_range = {1};
  spec.snr_range_db = {60.0};
  spec.base_seed = 5;
  spec.algorithms = {Algorithm::BlockLasso};
  const auto rows = run_hit_rate_experiment(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value >= 0.95);
  CHECK(rows[0].snr_db == 60.0);
  CHECK(rows[0].metric_name == "HitRate");
}

TEST_CASE("hit-rate experiment: block lasso dominates lasso on a small grid") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::HitRate;
  spec.params = make_params(32, 4);
  spec.scatterers_per_target = 4;
  spec.trials = 40;
  spec.k_range = {1, 2};
  spec.snr_range_db = {0.0, 10.0};
  spec.base_seed = 9;
  spec.algorithms = {Algorithm::Lasso, Algorithm::BlockLasso};
  const auto rows = run_hit_rate_experiment(spec);
  REQUIRE(rows.size() == 8);
  for (const auto& row : rows) {
    CHECK(row.value >= 0.0);
    CHECK(row.value <= 1.0);
  }
  CHECK(grid_mean(rows, Algorithm::BlockLasso) >=
        grid_mean(rows, Algorithm::Lasso));
}

TEST_CASE("analysis report: closed form in Simplified mode") {
  const auto single = run_analysis(make_params(16, 1), 2,
                                   DopplerMode::Simplified, 1, 0.1);
  CHECK(single.coherence.mu_intra == 0.0);
  CHECK(single.coherence.spectral_norm == 1.0);

  const auto report =
      run_analysis(make_params(32, 4), 3, DopplerMode::Simplified, 2, 0.1);
  CHECK(report.coherence.spectral_norm == 2.0);
  CHECK(report.coherence.method == spectral::CoherenceMethod::ClosedForm);
  CHECK(report.guarantee.vacuous);  // desk scale
  CHECK(report.success_probability > 0.0);

  const auto parsed =
      io::read_analysis_report(io::write_analysis_report(report));
  CHECK(parsed.coherence.mu_intra == report.coherence.mu_intra);
  CHECK(parsed.coherence.mu_inter == report.coherence.mu_inter);
  CHECK(parsed.condition.lhs == report.condition.lhs);
  CHECK(parsed.guarantee.k_max == report.guarantee.k_max);
  CHECK(parsed.guarantee.vacuous == report.guarantee.vacuous);
  CHECK(parsed.epsilon == report.epsilon);
}

TEST_CASE("analysis report: numeric in Exact mode") {
  const auto report =
      run_analysis(make_params(16, 2), 4, DopplerMode::Exact, 1, 0.1);
  CHECK(report.coherence.method == spectral::CoherenceMethod::NumericSvd);
  CHECK(report.coherence.mode == DopplerMode::Exact);
  CHECK(report.coherence.mu_intra >= 0.0);
  CHECK(report.coherence.spectral_norm > 0.0);
}

TEST_CASE("csv and manifest outputs") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::ExactRate;
  spec.params = make_params(16, 2);
  spec.scatterers_per_target = 2;
  spec.trials = 4;
  spec.k_range = {0, 1};
  spec.base_seed = 13;
  spec.algorithms = {Algorithm::BlockOmp};
  const auto rows = run_exact_rate_experiment(spec);

  const auto metrics_path = temp_file("rsfr_test_metrics.csv");
  write_metrics_csv(metrics_path.string(), rows);
  const std::string metrics = io::read_text_file(metrics_path.string());
  CHECK(metrics.rfind("algorithm,k,snr_db,metric,value,trials\n", 0) == 0);
  CHECK(metrics.find("block-omp,0,,ExactRecoveryRate,1,4") != std::string::npos);
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 3);

  ExperimentSpec ccdf_spec;
  ccdf_spec.kind = ExperimentKind::Ccdf;
  ccdf_spec.params = make_params(16, 2);
  ccdf_spec.modes = {{DopplerMode::Simplified, {}}};
  ccdf_spec.trials = 2;
  const auto ccdf = run_ccdf_experiment(ccdf_spec);
  const auto ccdf_path = temp_file("rsfr_test_ccdf.csv");
  write_ccdf_csv(ccdf_path.string(), ccdf);
  const std::string ccdf_text = io::read_text_file(ccdf_path.string());
  CHECK(ccdf_text.rfind("quantity,mode,threshold,empirical_ccdf,analytic_bound\n",
                        0) == 0);
  CHECK(std::count(ccdf_text.begin(), ccdf_text.end(), '\n') == 601);
  CHECK(ccdf_text.find(',') != std::string::npos);
  CHECK(ccdf_text.find("0.") != std::string::npos);  // '.' decimal separator

  const auto manifest_path = temp_file("rsfr_test_manifest.json");
  write_manifest(manifest_path.string(), spec, 1.25);
  const std::string manifest = io::read_text_file(manifest_path.string());
  CHECK(manifest.find("\"kind\": \"exact-rate\"") != std::string::npos);
  CHECK(manifest.find("\"library_version\": \"0.1.0\"") != std::string::npos);
  CHECK(manifest.find("\"wall_time_seconds\": 1.25") != std::string::npos);

  std::filesystem::remove(metrics_path);
  std::filesystem::remove(ccdf_path);
  std::filesystem::remove(manifest_path);
}

TEST_SUITE_END();
