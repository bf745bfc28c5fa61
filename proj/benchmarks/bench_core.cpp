#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include <biphoton/chip.hpp>
#include <biphoton/detection.hpp>
#include <biphoton/fitting.hpp>
#include <biphoton/observables.hpp>

using namespace biphoton;

namespace {

void BM_ApplyUnitary(benchmark::State& st) {
  const BellChip chip;
  const auto source = chip.source_state({0.0, 0.0, 0.0});
  for (auto _ : st) benchmark::DoNotOptimize(chip.to_fibers(source));
}
BENCHMARK(BM_ApplyUnitary);

void BM_CompileUnitary(benchmark::State& st) {
  const BellChip chip;
  for (auto _ : st) benchmark::DoNotOptimize(compile_unitary(chip.graph()));
}
BENCHMARK(BM_CompileUnitary);

void BM_OutputState(benchmark::State& st) {
  const BellChip chip;
  double alpha = 0.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(chip.output_state({alpha, 0.0, 0.0}));
    alpha = wrap_phase(alpha + 0.01);
  }
}
BENCHMARK(BM_OutputState);

void BM_BsmProbabilities(benchmark::State& st) {
  const BellChip chip;
  const SpectralEnvelope env;
  NoiseModel noise;
  noise.mode_overlap_mu = 0.87;
  double tau = -50.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(bsm_probabilities(chip, {3.14159, 0.0, 0.0}, tau, env, noise));
    tau = tau > 50.0 ? -50.0 : tau + 1.0;
  }
}
BENCHMARK(BM_BsmProbabilities);

void BM_FitFringe(benchmark::State& st) {
  std::vector<Sample> s;
  for (int i = 0; i < 101; ++i) s.push_back({0.1 * i, 3000.0 * (1.0 + 0.895 * std::cos(0.9 * 0.1 * i + 0.4))});
  for (auto _ : st) benchmark::DoNotOptimize(fit_fringe(s));
}
BENCHMARK(BM_FitFringe);

void BM_FitHom(benchmark::State& st) {
  const SpectralEnvelope env;
  std::vector<Sample> s;
  for (int i = -50; i <= 50; ++i) s.push_back({double(i), 10000.0 * (1.0 - 0.91 * overlap(env, i))});
  for (auto _ : st) benchmark::DoNotOptimize(fit_hom(s));
}
BENCHMARK(BM_FitHom);

void BM_SampleCounts(benchmark::State& st) {
  Rates r;
  r.coincidences = 2000.0;
  r.singles_1 = r.singles_2 = 2e4;
  std::uint64_t stream = 0;
  for (auto _ : st) benchmark::DoNotOptimize(sample_counts(r, 10.0, 42, stream++));
}
BENCHMARK(BM_SampleCounts);

}  // namespace

BENCHMARK_MAIN();
