#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numeric>

#include "retrainer/errors.hpp"
#include "retrainer/forecast/forecaster.hpp"
#include "retrainer/model_io.hpp"
#include "retrainer/rng.hpp"
#include "retrainer/stats/metrics.hpp"

using namespace retrainer;

namespace {

// Small stack so the unit tests stay fast; the full Table-style network is
// exercised by the harness and acceptance runs.
forecast::ForecasterConfig quick_config(std::uint64_t seed) {
  forecast::ForecasterConfig cfg;
  cfg.hidden = 16;
  cfg.epochs = 30;
  cfg.batches_per_epoch = 4;
  cfg.seed = seed;
  return cfg;
}

std::vector<double> noisy_constant(std::size_t n, double level, double noise, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = level + rng.gaussian(0.0, noise);
  return v;
}

}  // namespace

TEST_CASE("train_forecaster: constant series is predicted within tolerance") {
  const auto history = noisy_constant(400, 20.0, 0.1, 1);
  forecast::ForecastTrainingReport report;
  const auto model = forecast::train_forecaster(history, quick_config(2), &report);
  CHECK(model.trained);
  CHECK(model.version == 1);
  CHECK(report.epoch_loss.back() < report.epoch_loss.front());

  const std::vector<double> recent(history.end() - 10, history.end());
  const double pred = forecast::predict(model, recent);
  const double range = model.bounds.max - model.bounds.min;
  CHECK(std::abs(pred - 20.0) < 0.02 * range + 0.1);
}

TEST_CASE("train_forecaster: deterministic ramp beats ten percent of variance") {
  std::vector<double> ramp(400);
  std::iota(ramp.begin(), ramp.end(), 0.0);
  auto cfg = quick_config(3);
  cfg.epochs = 60;
  const auto model = forecast::train_forecaster(ramp, cfg);

  double mse = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 10; t < ramp.size(); ++t) {
    const std::vector<double> recent(ramp.begin() + t - 10, ramp.begin() + t);
    const double err = forecast::predict(model, recent) - ramp[t];
    mse += err * err;
    ++n;
  }
  mse /= static_cast<double>(n);

  const double mean = std::accumulate(ramp.begin(), ramp.end(), 0.0) / ramp.size();
  double variance = 0.0;
  for (double v : ramp) variance += (v - mean) * (v - mean);
  variance /= ramp.size();
  CHECK(mse < 0.1 * variance);
}

TEST_CASE("train_forecaster: too little history throws") {
  CHECK_THROWS_AS(forecast::train_forecaster(std::vector<double>(10, 1.0), quick_config(4)),
                  TrainingError);
}

TEST_CASE("predict: wrong input length throws, clamped inputs stay finite") {
  const auto history = noisy_constant(200, 20.0, 0.1, 5);
  const auto model = forecast::train_forecaster(history, quick_config(6));
  CHECK_THROWS_AS(forecast::predict(model, std::vector<double>(7, 20.0)), ShapeError);

  // Inputs far outside the training bounds clamp rather than blow up.
  const double out = forecast::predict(model, std::vector<double>(10, 2.0 * model.bounds.max));
  CHECK(std::isfinite(out));
  CHECK(out <= model.bounds.max);
  CHECK(out >= model.bounds.min);
}

TEST_CASE("predict: deterministic given fixed weights and input") {
  const auto history = noisy_constant(200, 20.0, 0.1, 7);
  const auto model = forecast::train_forecaster(history, quick_config(8));
  const std::vector<double> recent(history.end() - 10, history.end());
  CHECK(forecast::predict(model, recent) == forecast::predict(model, recent));
}

TEST_CASE("retrain: warm start, version handling, and level adaptation") {
  const auto history = noisy_constant(400, 1.0, 0.02, 9);
  auto cfg = quick_config(10);
  const auto model = forecast::train_forecaster(history, cfg);

  // Level shift down two orders, like a slice switchover.
  const auto shifted = noisy_constant(200, 0.03, 0.003, 11);
  const auto job = forecast::retrain(model, shifted, cfg, 510);
  CHECK(job.complete);
  CHECK(job.trigger_tick == 510);
  CHECK(job.completion_tick >= 510 + 100);
  CHECK(job.samples_used == 200);

  const auto replaced = forecast::replace(model, job);
  CHECK(replaced.version == model.version + 1);

  const std::vector<double> tail(shifted.end() - 10, shifted.end());
  const double before = std::abs(forecast::predict(model, tail) - 0.03);
  const double after = std::abs(forecast::predict(replaced, tail) - 0.03);
  CHECK(after < before);
}

TEST_CASE("retrain: stability on the same distribution") {
  const auto history = noisy_constant(400, 20.0, 0.2, 12);
  auto cfg = quick_config(13);
  const auto model = forecast::train_forecaster(history, cfg);

  const auto more = noisy_constant(300, 20.0, 0.2, 14);
  const auto job = forecast::retrain(model, more, cfg, 1000);
  const auto replaced = forecast::replace(model, job);

  const auto eval = noisy_constant(200, 20.0, 0.2, 15);
  std::vector<double> pred_before, pred_after, actual;
  for (std::size_t t = 10; t < eval.size(); ++t) {
    const std::vector<double> recent(eval.begin() + t - 10, eval.begin() + t);
    pred_before.push_back(forecast::predict(model, recent));
    pred_after.push_back(forecast::predict(replaced, recent));
    actual.push_back(eval[t]);
  }
  const double rmse_before = stats::rmse(pred_before, actual);
  const double rmse_after = stats::rmse(pred_after, actual);
  CHECK(rmse_after == doctest::Approx(rmse_before).epsilon(0.10));
}

TEST_CASE("retrain: empty data is a job error, caps keep the most recent samples") {
  const auto history = noisy_constant(200, 20.0, 0.1, 16);
  auto cfg = quick_config(17);
  const auto model = forecast::train_forecaster(history, cfg);
  CHECK_THROWS_AS(forecast::retrain(model, std::vector<double>{}, cfg, 0), TrainingError);

  cfg.max_retrain_samples = 50;
  const auto data = noisy_constant(500, 20.0, 0.1, 18);
  const auto job = forecast::retrain(model, data, cfg, 0);
  CHECK(job.samples_used == 50);
}

TEST_CASE("retrain: weights are never reset") {
  const auto history = noisy_constant(300, 20.0, 0.1, 19);
  auto cfg = quick_config(20);
  cfg.retrain_epochs = 0;  // zero continuation epochs isolate the warm start
  const auto model = forecast::train_forecaster(history, cfg);
  const auto job = forecast::retrain(model, history, cfg, 42);

  double distance = 0.0;
  for (std::size_t l = 0; l < model.cells.size(); ++l) {
    const auto& a = model.cells[l].wi.a;
    const auto& b = job.model.cells[l].wi.a;
    for (std::size_t i = 0; i < a.size(); ++i) distance += std::abs(a[i] - b[i]);
  }
  CHECK(distance == 0.0);
}

TEST_CASE("replace: incomplete job is a state error") {
  const auto history = noisy_constant(200, 20.0, 0.1, 21);
  const auto model = forecast::train_forecaster(history, quick_config(22));
  forecast::RetrainJob job;
  job.model = model;
  job.complete = false;
  CHECK_THROWS_AS(forecast::replace(model, job), StateError);
}

TEST_CASE("replace: new weights actually serve") {
  const auto history = noisy_constant(300, 1.0, 0.02, 23);
  auto cfg = quick_config(24);
  const auto model = forecast::train_forecaster(history, cfg);
  const auto shifted = noisy_constant(200, 0.03, 0.003, 25);
  const auto replaced = forecast::replace(model, forecast::retrain(model, shifted, cfg, 0));

  const std::vector<double> probe(10, 0.5);
  CHECK(forecast::predict(replaced, probe) != forecast::predict(model, probe));
}

TEST_CASE("forecaster serialization round trip") {
  const auto history = noisy_constant(200, 20.0, 0.1, 26);
  const auto model = forecast::train_forecaster(history, quick_config(27));
  save_forecaster(model, "forecaster_roundtrip.model");
  const auto back = load_forecaster("forecaster_roundtrip.model");
  CHECK(back.version == model.version);
  CHECK(back.lookback == model.lookback);
  const std::vector<double> recent(history.end() - 10, history.end());
  CHECK(forecast::predict(back, recent) == forecast::predict(model, recent));
  std::remove("forecaster_roundtrip.model");
}
