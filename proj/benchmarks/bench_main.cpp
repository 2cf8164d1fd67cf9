#include <benchmark/benchmark.h>

#include "cwrmt/circuits.hpp"
#include "cwrmt/definetti.hpp"
#include "cwrmt/ensembles.hpp"
#include "cwrmt/spectral.hpp"

using namespace cwrmt;

namespace {

EnsembleConfig full_cw(std::size_t N, double beta) {
  EnsembleConfig cfg;
  cfg.kind = EnsembleKind::full_cw;
  cfg.N = N;
  cfg.beta = beta;
  return cfg;
}

void BM_MeasureBuild(benchmark::State& state) {
  const double beta = static_cast<double>(state.range(0)) / 4.0;
  const Potential f = curie_weiss_potential(beta);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DeFinettiMeasure::create(f, 1e6).log_normalizer());
  }
}
BENCHMARK(BM_MeasureBuild)->Arg(2)->Arg(4)->Arg(8);

void BM_LatentSample(benchmark::State& state) {
  const auto mu = DeFinettiMeasure::create(curie_weiss_potential(1.5), 1e6);
  auto rng = seed_stream(1, 0, Purpose::latent);
  for (auto _ : state) benchmark::DoNotOptimize(mu.sample_t(rng));
}
BENCHMARK(BM_LatentSample);

void BM_SampleMatrix(benchmark::State& state) {
  const EnsembleSampler sampler(full_cw(static_cast<std::size_t>(state.range(0)), 0.5));
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(r++));
}
BENCHMARK(BM_SampleMatrix)->Arg(200)->Arg(1000);

void BM_Eigenvalues(benchmark::State& state) {
  const EnsembleSampler sampler(full_cw(static_cast<std::size_t>(state.range(0)), 0.5));
  const ScaledMatrix A = scale(sampler.sample(0), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(A));
}
BENCHMARK(BM_Eigenvalues)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_EnumerateClasses(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_classes(k));
}
BENCHMARK(BM_EnumerateClasses)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_ExactTraceMoment(benchmark::State& state) {
  const auto seq = moments_of(DeFinettiMeasure::create(curie_weiss_potential(1.5), 1e4));
  for (auto _ : state) benchmark::DoNotOptimize(exact_trace_moment(seq, 20, 6, 0.5));
}
BENCHMARK(BM_ExactTraceMoment);

}  // namespace
BENCHMARK_MAIN();
