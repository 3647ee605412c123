// Acceptance suite: one independently runnable check per criterion.
// Usage: rsfr_acceptance [criterion ...]; no arguments runs all nine.
// Prints one [PASS]/[FAIL] line per criterion and exits with the number
// of failures.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rsfr/rsfr.hpp"

using namespace rsfr;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

RadarParams desk_params(int n, int m) { return {n, m, 30.0e6, 9.0e9, 20.0e-6}; }

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

// --- 1. spectral norm identity --------------------------------------------

Outcome criterion_spectral_norm_identity() {
  Outcome outcome;
  double worst = 0.0;
  const std::vector<std::pair<int, int>> sizes{{32, 4}, {64, 8}, {128, 16}};
  for (const auto& [n, m] : sizes) {
    const auto params = desk_params(n, m);
    const double target = std::sqrt(static_cast<double>(m));
    for (std::uint64_t draw = 0; draw < 100; ++draw) {
      const auto matrix = build_observation_matrix(
          params, draw_codes(params, draw), DopplerMode::Simplified);
      const double numeric = spectral::spectral_norm_numeric(matrix);
      worst = std::max(worst, std::abs(numeric - target));
      if (n == 32 && draw < 10) {
        // independent oracle: full-matrix SVD on the small size
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix.entries());
        worst = std::max(worst, std::abs(svd.singularValues()(0) - target));
      }
    }
  }
  outcome.pass = worst < 1e-9;
  outcome.detail = "max |numeric - sqrt(M)| = " + format_number(worst);
  return outcome;
}

// --- 2. closed-form spectrum equivalence ----------------------------------

Outcome criterion_closed_form_spectrum() {
  Outcome outcome;
  const auto params = desk_params(16, 4);
  double worst_eig = 0.0;
  double worst_sv = 0.0;
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(4, 4);
  for (std::uint64_t draw = 0; draw < 50; ++draw) {
    const auto matrix = build_observation_matrix(
        params, draw_codes(params, draw), DopplerMode::Simplified);
    for (int q1 = 0; q1 < 16; ++q1) {
      for (int q2 = 0; q2 < 16; ++q2) {
        const auto block = spectral::gram_block(matrix, q1, q2);
        const auto closed = spectral::block_eigenvalues_closed_form(
            matrix.codes(), 4, q2 - q1);

        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(block.block, false);
        std::vector<std::complex<double>> numeric(
            eig.eigenvalues().data(), eig.eigenvalues().data() + 4);
        for (int m = 0; m < 4; ++m) {
          double best = 1e300;
          std::size_t pick = 0;
          for (std::size_t j = 0; j < numeric.size(); ++j) {
            const double d = std::abs(closed.eigenvalues[m] - numeric[j]);
            if (d < best) {
              best = d;
              pick = j;
            }
          }
          worst_eig = std::max(worst_eig, best);
          numeric.erase(numeric.begin() + static_cast<std::ptrdiff_t>(pick));
        }

        Eigen::MatrixXcd shifted = block.block;
        if (q1 == q2) shifted -= identity;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
        std::vector<double> analytic(closed.singular_values.data(),
                                     closed.singular_values.data() + 4);
        std::sort(analytic.begin(), analytic.end(), std::greater<>());
        for (int i = 0; i < 4; ++i)
          worst_sv = std::max(worst_sv, std::abs(analytic[static_cast<std::size_t>(i)] -
                                                 svd.singularValues()(i)));
      }
    }
  }
  outcome.pass = worst_eig < 1e-10 && worst_sv < 1e-10;
  outcome.detail = "max eigenvalue gap " + format_number(worst_eig) +
                   ", max singular-value gap " + format_number(worst_sv);
  return outcome;
}

// --- 3. circulant structure ------------------------------------------------

Outcome criterion_structure() {
  Outcome outcome;
  const auto params = desk_params(12, 3);
  double worst = 0.0;
  for (std::uint64_t draw = 0; draw < 20; ++draw) {
    const auto matrix = build_observation_matrix(
        params, draw_codes(params, draw), DopplerMode::Simplified);
    for (int q1 = 0; q1 < 12; ++q1) {
      for (int q2 = 0; q2 < 12; ++q2) {
        const Eigen::MatrixXcd block = spectral::gram_block(matrix, q1, q2).block;
        for (int p1 = 0; p1 < 3; ++p1)
          for (int p2 = 0; p2 < 3; ++p2)
            worst = std::max(
                worst, std::abs(block(p1, p2) -
                                block(0, (((p2 - p1) % 3) + 3) % 3)));
        const Eigen::MatrixXcd base =
            spectral::gram_block(matrix, 0, (((q2 - q1) % 12) + 12) % 12).block;
        worst = std::max(worst, (block - base).cwiseAbs().maxCoeff());
      }
    }
  }
  outcome.pass = worst < 1e-12;
  outcome.detail = "max structural deviation " + format_number(worst);
  return outcome;
}

// --- 4. tail-bound domination ----------------------------------------------

Outcome criterion_tail_bound() {
  Outcome outcome;
  const int draws = 10000;
  const std::vector<std::pair<int, int>> sizes{{2, 16}, {4, 32}, {4, 64}};
  const std::vector<double> epsilons{0.3, 0.5, 0.8};
  double worst_margin = -1.0;  // empirical - bound, most adverse cell
  for (const auto& [m, n] : sizes) {
    const auto params = desk_params(n, m);
    const std::vector<int> lags{0, 1, n / 4};
    // exceedance counts per (lag, epsilon, m)
    std::vector<std::vector<std::vector<int>>> counts(
        lags.size(), std::vector<std::vector<int>>(
                         epsilons.size(), std::vector<int>(m, 0)));
    for (int draw = 0; draw < draws; ++draw) {
      const auto codes =
          draw_codes(params, 1000000 + static_cast<std::uint64_t>(draw));
      for (std::size_t li = 0; li < lags.size(); ++li) {
        const auto spectrum =
            spectral::block_eigenvalues_closed_form(codes, m, lags[li]);
        for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
          const double threshold =
              std::sqrt((m - 1.0) / n) + epsilons[ei];
          for (int mm = 0; mm < m; ++mm)
            if (spectrum.singular_values[mm] > threshold) ++counts[li][ei][mm];
        }
      }
    }
    for (std::size_t li = 0; li < lags.size(); ++li) {
      for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
        const double bound =
            bounds::singular_value_tail_bound({m, n, epsilons[ei]});
        for (int mm = 0; mm < m; ++mm) {
          const double empirical =
              static_cast<double>(counts[li][ei][mm]) / draws;
          worst_margin = std::max(worst_margin, empirical - bound);
          if (empirical > bound) outcome.pass = false;
        }
      }
    }
  }
  outcome.detail =
      "worst (empirical - bound) = " + format_number(worst_margin);
  return outcome;
}

// --- 5. coherence CCDF domination -------------------------------------------

Outcome criterion_ccdf_domination() {
  Outcome outcome;
  experiments::ExperimentSpec spec;
  spec.kind = experiments::ExperimentKind::Ccdf;
  spec.params = desk_params(32, 4);
  spec.modes = {{DopplerMode::Simplified, {}}};
  spec.trials = 1000;
  spec.base_seed = 1;
  const auto result = experiments::run_ccdf_experiment(spec);

  for (double s : result.samples.at("spectral_norm/simplified")) {
    if (s != 2.0) {
      outcome.pass = false;
      outcome.detail = "spectral norm sample departs from sqrt(M)";
      return outcome;
    }
  }
  double worst_margin = -1.0;
  for (const auto& point : result.points) {
    if (!point.bound) continue;
    worst_margin = std::max(worst_margin, point.empirical - *point.bound);
    if (point.empirical > *point.bound) outcome.pass = false;
  }
  outcome.detail = "spectral norm is a step at 2; worst (empirical - bound) = " +
                   format_number(worst_margin);
  return outcome;
}

// --- 6. noiseless block superiority -----------------------------------------

Outcome criterion_noiseless_superiority() {
  Outcome outcome;
  experiments::ExperimentSpec spec;
  spec.kind = experiments::ExperimentKind::ExactRate;
  spec.params = desk_params(64, 8);
  spec.scatterers_per_target = 8;
  spec.trials = 200;
  spec.k_range = {1, 2, 3, 4, 5, 6, 7, 8};
  spec.base_seed = 1;
  spec.algorithms = {experiments::Algorithm::Omp,
                     experiments::Algorithm::BlockOmp};
  const auto rows = experiments::run_exact_rate_experiment(spec);

  std::ostringstream detail;
  for (int k : spec.k_range) {
    double omp_rate = -1.0;
    double bomp_rate = -1.0;
    for (const auto& row : rows) {
      if (row.k != k) continue;
      if (row.algorithm == experiments::Algorithm::Omp) omp_rate = row.value;
      if (row.algorithm == experiments::Algorithm::BlockOmp)
        bomp_rate = row.value;
    }
    if (bomp_rate < omp_rate) outcome.pass = false;
    if (k == 1 && bomp_rate < 0.99) outcome.pass = false;
    detail << "K=" << k << " omp=" << format_number(omp_rate)
           << " block=" << format_number(bomp_rate) << "; ";
  }
  outcome.detail = detail.str();
  return outcome;
}

// --- 7. noisy phase diagram --------------------------------------------------

Outcome criterion_noisy_phase_diagram() {
  Outcome outcome;
  experiments::ExperimentSpec spec;
  spec.kind = experiments::ExperimentKind::HitRate;
  spec.params = desk_params(64, 8);
  spec.scatterers_per_target = 8;
  spec.trials = 200;
  spec.k_range = {1, 2, 3, 4, 5, 6};
  spec.snr_range_db = {0.0, 5.0, 10.0, 15.0};
  spec.base_seed = 1;
  spec.algorithms = {experiments::Algorithm::Lasso,
                     experiments::Algorithm::BlockLasso};
  const auto rows = experiments::run_hit_rate_experiment(spec);

  const auto cell = [&](experiments::Algorithm a, int k,
                        double snr) {
    for (const auto& row : rows)
      if (row.algorithm == a && row.k == k && row.snr_db == snr)
        return row.value;
    return -1.0;
  };

  double worst_dip = 0.0;
  for (auto algorithm : spec.algorithms) {
    for (int k : spec.k_range) {
      for (std::size_t si = 0; si + 1 < spec.snr_range_db.size(); ++si) {
        const double low = cell(algorithm, k, spec.snr_range_db[si]);
        const double high = cell(algorithm, k, spec.snr_range_db[si + 1]);
        const double sigma = std::sqrt(
            (low * (1 - low) + high * (1 - high)) / spec.trials);
        if (high < low - 2.0 * sigma) outcome.pass = false;
        worst_dip = std::max(worst_dip, low - high);
      }
    }
  }
  double lasso_mean = 0.0;
  double block_mean = 0.0;
  int cells = 0;
  for (const auto& row : rows) {
    if (row.algorithm == experiments::Algorithm::Lasso) {
      lasso_mean += row.value;
      ++cells;
    } else {
      block_mean += row.value;
    }
  }
  lasso_mean /= cells;
  block_mean /= cells;
  if (block_mean < lasso_mean) outcome.pass = false;
  outcome.detail = "grid mean lasso=" + format_number(lasso_mean) +
                   " block=" + format_number(block_mean) +
                   ", worst SNR dip=" + format_number(worst_dip);
  return outcome;
}

// --- 8. tiny-instance oracle equivalence ------------------------------------

Outcome criterion_solver_oracle() {
  Outcome outcome;
  const auto params = desk_params(8, 2);
  int pursuit_matches = 0;
  int greedy_matches = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto matrix = build_observation_matrix(
        params, draw_codes(params, seed), DopplerMode::Simplified);
    const auto scene = synthesize_scene(params, 1, 2, seed);
    const auto x = scene_to_vector(scene, params);
    const Eigen::VectorXcd y = matrix.entries() * x.values;

    // exhaustive minimal-block-support oracle: the single blocks able to
    // reproduce y exactly (always nonempty here; several means the
    // minimal support is not unique and any of them counts)
    std::vector<int> feasible;
    for (int q = 0; q < 8; ++q) {
      const Eigen::MatrixXcd block = matrix.block(q);
      const Eigen::VectorXcd coef = block.colPivHouseholderQr().solve(y);
      if ((y - block * coef).norm() <= 1e-8 * y.norm()) feasible.push_back(q);
    }
    const auto is_minimal = [&](const std::vector<int>& support) {
      return support.size() == 1 &&
             std::find(feasible.begin(), feasible.end(), support[0]) !=
                 feasible.end();
    };
    const auto pursuit = recovery::basis_pursuit_solve(matrix, y, {}, true);
    if (is_minimal(pursuit.block_support)) ++pursuit_matches;
    const auto greedy = recovery::block_omp(matrix, y, 1);
    if (is_minimal(greedy.block_support)) ++greedy_matches;
  }
  outcome.pass = pursuit_matches >= 24 && greedy_matches >= 24;
  outcome.detail = "pursuit " + std::to_string(pursuit_matches) +
                   "/25, greedy " + std::to_string(greedy_matches) + "/25";
  return outcome;
}

// --- 9. sparsity-guarantee scaling ------------------------------------------

Outcome criterion_sparsity_guarantee() {
  Outcome outcome;

  // the flag must be honest at desk scale
  const auto desk = bounds::guaranteed_block_sparsity(8, 128, 0.1);
  if (!desk.vacuous) outcome.pass = false;

  // certified fraction k_max * M * log(MN) / N across N = 2^30, 2^34, 2^38
  std::vector<double> ratios;
  std::ostringstream detail;
  detail << "desk vacuous=" << (desk.vacuous ? "yes" : "no") << "; ratios:";
  for (int e : {30, 34, 38}) {
    const std::uint64_t n = 1ull << e;
    const auto guarantee = bounds::guaranteed_block_sparsity(2, n, 0.1);
    const double ratio = static_cast<double>(guarantee.k_max) * 2.0 *
                         std::log(2.0 * static_cast<double>(n)) /
                         static_cast<double>(n);
    ratios.push_back(ratio);
    detail << " N=2^" << e << " -> " << format_number(ratio);
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  const bool ratio_stable = lo > 0.0 && (hi - lo) / lo < 0.25;
  if (!ratio_stable) outcome.pass = false;
  detail << "; spread " << (lo > 0.0 ? format_number((hi - lo) / lo) : std::string("inf"));
  outcome.detail = detail.str();
  return outcome;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"spectral norm identity", criterion_spectral_norm_identity},
      {"closed-form spectrum equivalence", criterion_closed_form_spectrum},
      {"circulant structure properties", criterion_structure},
      {"tail-bound domination", criterion_tail_bound},
      {"coherence CCDF domination", criterion_ccdf_domination},
      {"noiseless block superiority", criterion_noiseless_superiority},
      {"noisy phase diagram", criterion_noisy_phase_diagram},
      {"tiny-instance solver oracle equivalence", criterion_solver_oracle},
      {"sparsity-guarantee scaling", criterion_sparsity_guarantee},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int index = std::atoi(argv[i]);
    if (index < 1 || index > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion: %s\n", argv[i]);
      return 127;
    }
    selected.push_back(index);
  }
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i)
      selected.push_back(i);

  int failures = 0;
  for (int index : selected) {
    const auto& [name, run] = criteria[static_cast<std::size_t>(index - 1)];
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %d: %s — %s (%.1fs)\n",
                outcome.pass ? "PASS" : "FAIL", index, name.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures;
}
