#include <benchmark/benchmark.h>

#include <vector>

#include "retrainer/detect/detector.hpp"
#include "retrainer/forecast/forecaster.hpp"
#include "retrainer/genai/vae.hpp"
#include "retrainer/rng.hpp"
#include "retrainer/stats/ks.hpp"
#include "retrainer/stats/lof.hpp"

namespace {

using namespace retrainer;

std::vector<double> gaussian_samples(std::size_t n, std::uint64_t seed, double mean = 0.5,
                                     double std = 0.05) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.gaussian(mean, std);
  return v;
}

void BM_KsExact10(benchmark::State& state) {
  const auto a = gaussian_samples(10, 1);
  const auto b = gaussian_samples(10, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::ks_two_sample(a, b));
  }
}
BENCHMARK(BM_KsExact10);

void BM_KsAsymptotic500(benchmark::State& state) {
  const auto a = gaussian_samples(500, 3);
  const auto b = gaussian_samples(500, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::ks_two_sample(a, b));
  }
}
BENCHMARK(BM_KsAsymptotic500);

void BM_LofScore(benchmark::State& state) {
  const stats::LofReference ref(gaussian_samples(500, 5, 20.0, 0.5), 20);
  double q = 20.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ref.score(q));
  }
}
BENCHMARK(BM_LofScore);

void BM_LofBatch(benchmark::State& state) {
  const auto pts = gaussian_samples(static_cast<std::size_t>(state.range(0)), 6, 20.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::lof(pts, 20));
  }
}
BENCHMARK(BM_LofBatch)->Arg(100)->Arg(500);

void BM_LstmStep(benchmark::State& state) {
  nn::LstmCell cell(1, static_cast<int>(state.range(0)));
  Rng rng(7);
  cell.init(rng);
  auto st = cell.zero_state();
  const double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cell.step(std::span<const double>(&x, 1), st));
  }
}
BENCHMARK(BM_LstmStep)->Arg(32)->Arg(100);

void BM_ForecasterPredict(benchmark::State& state) {
  forecast::ForecasterConfig cfg;
  cfg.epochs = 1;
  cfg.batches_per_epoch = 1;
  const auto history = gaussian_samples(200, 8, 20.0, 0.5);
  const auto model = forecast::train_forecaster(history, cfg);
  const auto recent = gaussian_samples(10, 9, 20.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forecast::predict(model, recent));
  }
}
BENCHMARK(BM_ForecasterPredict);

void BM_VaeDetectorStep(benchmark::State& state) {
  genai::VaeConfig cfg;
  cfg.epochs = 5;
  std::vector<std::vector<double>> windows;
  for (int i = 0; i < 60; ++i) windows.push_back(gaussian_samples(10, 100 + i));
  auto [model, report] = genai::vae_train(windows, cfg);

  auto det = detect::make_detector(detect::DetectorKind::Vae, {}, 11);
  detect::Window w{0, 0, gaussian_samples(10, 12)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect::vae_detector_step(det, w, model));
  }
}
BENCHMARK(BM_VaeDetectorStep);

}  // namespace

BENCHMARK_MAIN();
