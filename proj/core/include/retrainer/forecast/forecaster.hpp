#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "retrainer/nn/dense.hpp"
#include "retrainer/nn/lstm.hpp"
#include "retrainer/stream/normalize.hpp"

namespace retrainer::forecast {

struct ForecasterConfig {
  int lookback = 10;
  int hidden = 100;
  int num_layers = 3;
  nn::Activation cell_activation = nn::Activation::Relu;
  int epochs = 15;
  int batch_size = 16;
  int batches_per_epoch = 2;  // random mini-batches sampled per epoch
  double learning_rate = 0.001;
  int retrain_epochs = 8;
  std::size_t max_retrain_samples = 500;
  // Simulated retraining cost in stream ticks: base + per_sample * n.
  double retrain_base_ticks = 100.0;
  double retrain_per_sample_ticks = 0.1;
  std::uint64_t seed = 1;
};

// Stacked-LSTM next-value throughput predictor. Consumes exactly `lookback`
// past samples, emits one denormalized KPI value.
struct Forecaster {
  std::vector<nn::LstmCell> cells;
  nn::DenseLayer head;  // hidden -> 1, linear
  int lookback = 10;
  stream::Bounds bounds{0.0, 1.0};
  std::uint64_t version = 0;
  bool trained = false;
};

struct RetrainJob {
  std::uint64_t trigger_tick = 0;
  std::uint64_t start_tick = 0;
  std::uint64_t completion_tick = 0;
  std::size_t samples_used = 0;
  bool complete = false;
  Forecaster model;  // retrained weights awaiting the swap
};

struct ForecastTrainingReport {
  std::vector<double> epoch_loss;
};

// Trains from scratch on a raw KPI history. Requires |history| >= lookback+1.
Forecaster train_forecaster(std::span<const double> history, const ForecasterConfig& cfg,
                            ForecastTrainingReport* report = nullptr);

// One-step-ahead prediction from exactly `lookback` raw samples; inputs are
// clamped into the training bounds, the output is denormalized.
double predict(const Forecaster& model, std::span<const double> recent);

// Warm-start continuation on newly collected data. Weights are never reset;
// normalization bounds are refreshed from new_data so level shifts stay
// learnable. Completion tick is simulated from the configured cost model.
RetrainJob retrain(const Forecaster& model, std::span<const double> new_data,
                   const ForecasterConfig& cfg, std::uint64_t trigger_tick);

// Atomic swap: returns the retrained model carrying version + 1. Throws
// StateError when the job is not complete.
Forecaster replace(const Forecaster& active, const RetrainJob& job);

}  // namespace retrainer::forecast
