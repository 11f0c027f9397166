// Serial reference versus OpenMP for each parallel kernel. The second
// argument selects the execution policy (0 serial, 1 parallel).
#include <benchmark/benchmark.h>

#include "fbmlab/bounds.hpp"
#include "fbmlab/config.hpp"
#include "fbmlab/fbm_sampler.hpp"
#include "fbmlab/gaussian_diagnostics.hpp"
#include "fbmlab/gaussian_oracle.hpp"
#include "fbmlab/parallel_kernels.hpp"
#include "fbmlab/volterra_kernel.hpp"

namespace {

using fbmlab::par::Exec;

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_VolterraWeights(benchmark::State& state) {
  const fbmlab::KernelSpec spec(fbmlab::HurstParameter(0.3), fbmlab::KernelFamily::Volterra);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        fbmlab::build_volterra_unit_weights(spec, static_cast<std::size_t>(state.range(0)), exec_of(state)));
}
BENCHMARK(BM_VolterraWeights)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_PsiTable(benchmark::State& state) {
  const fbmlab::HurstParameter h(0.7);
  for (auto _ : state)
    benchmark::DoNotOptimize(fbmlab::bounds::sum_psi_squared(h, fbmlab::bounds::Horizon::Discrete,
                                                             static_cast<double>(state.range(0)), exec_of(state)));
}
BENCHMARK(BM_PsiTable)->ArgsProduct({{1024, 4096}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_OracleVariance(benchmark::State& state) {
  fbmlab::ExperimentConfig cfg;
  cfg.hurst = 0.7;
  cfg.validate();
  const auto model = fbmlab::oracle::model_from(cfg.make_sde());
  for (auto _ : state)
    benchmark::DoNotOptimize(fbmlab::oracle::discrete_variance(
        model, 1.0, static_cast<std::size_t>(state.range(0)), 0, exec_of(state)));
}
BENCHMARK(BM_OracleVariance)->ArgsProduct({{256, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_SupMonteCarlo(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        fbmlab::diag::sample_bm_suprema(2, static_cast<std::size_t>(state.range(0)), 256, 7, 0, exec_of(state)));
}
BENCHMARK(BM_SupMonteCarlo)->ArgsProduct({{4096}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_CholeskyBatch(benchmark::State& state) {
  const fbmlab::KernelSpec spec(fbmlab::HurstParameter(0.7), fbmlab::KernelFamily::Volterra);
  const fbmlab::TimeGrid grid(1.0, static_cast<std::size_t>(state.range(0)));
  const fbmlab::FbmBatchSampler sampler(fbmlab::NoiseMethod::Cholesky, spec, grid, 1);
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    fbmlab::par::for_each_chunk(exec, 1024, fbmlab::FbmBatchSampler::kBlock, [&](std::size_t b, std::size_t e) {
      benchmark::DoNotOptimize(sampler.sample(1, b, e - b));
    });
  }
}
BENCHMARK(BM_CholeskyBatch)->ArgsProduct({{256}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
