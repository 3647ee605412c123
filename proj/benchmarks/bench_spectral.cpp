#include <benchmark/benchmark.h>

#include "rsfr/frequency_codes.hpp"
#include "rsfr/observation_matrix.hpp"
#include "rsfr/spectral.hpp"

namespace {

using namespace rsfr;

RadarParams params_of(int n, int m) { return {n, m, 30.0e6, 9.0e9, 20.0e-6}; }

void BM_BuildMatrix(benchmark::State& state) {
  const auto params = params_of(static_cast<int>(state.range(0)),
                                static_cast<int>(state.range(1)));
  const auto codes = draw_codes(params, 1);
  for (auto _ : state) {
    auto matrix =
        build_observation_matrix(params, codes, DopplerMode::Simplified);
    benchmark::DoNotOptimize(matrix.entries().data());
  }
}
BENCHMARK(BM_BuildMatrix)->Args({32, 4})->Args({64, 8})->Args({128, 16});

void BM_CoherenceClosedForm(benchmark::State& state) {
  const auto params = params_of(static_cast<int>(state.range(0)),
                                static_cast<int>(state.range(1)));
  const auto codes = draw_codes(params, 1);
  for (auto _ : state) {
    const double mu_intra =
        spectral::intra_block_coherence_closed_form(codes, params.n_freqs);
    const double mu_inter =
        spectral::inter_block_coherence_closed_form(codes, params.n_freqs);
    benchmark::DoNotOptimize(mu_intra + mu_inter);
  }
}
BENCHMARK(BM_CoherenceClosedForm)->Args({32, 4})->Args({128, 16});

void BM_CoherenceNumeric(benchmark::State& state) {
  const auto params = params_of(static_cast<int>(state.range(0)),
                                static_cast<int>(state.range(1)));
  const auto matrix = build_observation_matrix(params, draw_codes(params, 1),
                                               DopplerMode::Simplified);
  for (auto _ : state) {
    const double mu_intra = spectral::intra_block_coherence_numeric(matrix);
    const double mu_inter = spectral::inter_block_coherence_numeric(matrix);
    benchmark::DoNotOptimize(mu_intra + mu_inter);
  }
}
BENCHMARK(BM_CoherenceNumeric)->Args({32, 4});

void BM_SpectralNormNumeric(benchmark::State& state) {
  const auto params = params_of(static_cast<int>(state.range(0)),
                                static_cast<int>(state.range(1)));
  const auto matrix = build_observation_matrix(params, draw_codes(params, 1),
                                               DopplerMode::Exact);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral::spectral_norm_numeric(matrix));
  }
}
BENCHMARK(BM_SpectralNormNumeric)->Args({32, 4})->Args({128, 16});

}  // namespace
