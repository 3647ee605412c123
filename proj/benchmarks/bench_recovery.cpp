#include <benchmark/benchmark.h>

#include "rsfr/recovery.hpp"
#include "rsfr/target_scene.hpp"

namespace {

using namespace rsfr;

struct Instance {
  ObservationMatrix matrix;
  Eigen::VectorXcd y;
};

Instance make_instance(int n, int m, int k, double noise_power) {
  const RadarParams params{n, m, 30.0e6, 9.0e9, 20.0e-6};
  const auto codes = draw_codes(params, 9);
  auto matrix = build_observation_matrix(params, codes, DopplerMode::Exact);
  const auto scene = synthesize_scene(params, k, m, 9);
  const auto x = scene_to_vector(scene, params);
  auto y = synthesize_measurement(matrix, x, noise_power, 9).samples;
  return {std::move(matrix), std::move(y)};
}

void BM_BlockOmp(benchmark::State& state) {
  const auto instance = make_instance(64, 8, static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) {
    auto result = recovery::block_omp(instance.matrix, instance.y,
                                      static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(result.estimate.data());
  }
}
BENCHMARK(BM_BlockOmp)->Arg(1)->Arg(4);

void BM_Omp(benchmark::State& state) {
  const auto instance = make_instance(64, 8, static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) {
    auto result = recovery::omp(instance.matrix, instance.y,
                                static_cast<int>(state.range(0)) * 8);
    benchmark::DoNotOptimize(result.estimate.data());
  }
}
BENCHMARK(BM_Omp)->Arg(1)->Arg(4);

void BM_BlockLasso(benchmark::State& state) {
  const auto instance = make_instance(64, 8, 2, snr_to_noise_power(10.0));
  for (auto _ : state) {
    auto result = recovery::block_lasso_solve(instance.matrix, instance.y);
    benchmark::DoNotOptimize(result.estimate.data());
  }
}
BENCHMARK(BM_BlockLasso);

void BM_BlockBasisPursuit(benchmark::State& state) {
  const auto instance = make_instance(64, 8, 2, 0.0);
  for (auto _ : state) {
    auto result =
        recovery::basis_pursuit_solve(instance.matrix, instance.y, {}, true);
    benchmark::DoNotOptimize(result.estimate.data());
  }
}
BENCHMARK(BM_BlockBasisPursuit);

}  // namespace

BENCHMARK_MAIN();
