// Microbenchmarks for the per-pair scoring hot path. The interesting sizes
// are the dataset's 299x299 pairs; 64x64 is included to expose per-call
// overhead (FFT planning, window construction).

#include <benchmark/benchmark.h>

#include "ifa/descriptors.hpp"
#include "ifa/metrics.hpp"
#include "ifa/norms.hpp"
#include "support.hpp"

namespace ts = test_support;
using namespace ifa;

namespace {

std::pair<Image, Image> make_pair(int n) {
  auto gen = ts::rng(7);
  Image ref = ts::synthetic_content(n, n, 0);
  Image test = ts::noisy_image(ref, 8.0, gen);
  return {std::move(ref), std::move(test)};
}

template <MetricScore (*Fn)(const Image&, const Image&, const MetricConstants&)>
void bench_metric(benchmark::State& state) {
  const auto [ref, test] = make_pair(static_cast<int>(state.range(0)));
  const MetricConstants c;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Fn(ref, test, c));
  }
}

void bench_norms(benchmark::State& state) {
  const auto [ref, test] = make_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(l0_norm(ref, test));
    benchmark::DoNotOptimize(l2_norm(ref, test));
    benchmark::DoNotOptimize(linf_norm(ref, test));
  }
}

void bench_descriptors(benchmark::State& state) {
  const auto [ref, test] = make_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(spatial_information(ref));
    benchmark::DoNotOptimize(colorfulness(ref));
  }
}

}  // namespace

BENCHMARK(bench_metric<psnr>)->Arg(64)->Arg(299)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_metric<ssim>)->Arg(64)->Arg(299)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_metric<ms_ssim>)->Arg(299)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_metric<uqi>)->Arg(64)->Arg(299)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_metric<gsim>)->Arg(64)->Arg(299)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_metric<wsnr>)->Arg(64)->Arg(299)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_metric<vifp>)->Arg(64)->Arg(299)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_norms)->Arg(299)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_descriptors)->Arg(299)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
