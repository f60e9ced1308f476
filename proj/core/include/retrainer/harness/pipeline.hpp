#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "retrainer/config.hpp"
#include "retrainer/forecast/forecaster.hpp"
#include "retrainer/genai/gan.hpp"
#include "retrainer/genai/vae.hpp"
#include "retrainer/stats/lof.hpp"
#include "retrainer/stream/normalize.hpp"

namespace retrainer::harness {

// Everything one run needs: the generative pair with calibrated thresholds,
// the serving forecaster, the LOF reference population, and the training-tail
// samples used to warm up serving.
struct TrainedBundle {
  std::shared_ptr<const genai::VaeModel> vae;
  std::shared_ptr<const genai::GanModel> gan;
  std::shared_ptr<const stats::LofReference> lof_reference;
  forecast::Forecaster forecaster;
  stream::Bounds bounds;               // normalization used by the generative pair
  std::vector<double> serving_warmup;  // last lookback samples of the training stream
  genai::TrainingReport vae_report;
  genai::TrainingReport gan_report;
  forecast::ForecastTrainingReport forecaster_report;
};

// Chops a raw sample series into consecutive non-overlapping windows.
std::vector<std::vector<double>> chop_windows(std::span<const double> samples, int window_size);

// Generates the training stream for `cfg`, trains and calibrates all models.
// The per-trial seed controls stream, initialization, and noise sequences.
TrainedBundle train_models(const Config& cfg, std::uint64_t seed);

// Raw training samples for the bundle above (exposed for the CLI so the
// artifacts and the LOF reference can be rebuilt from the same stream).
std::vector<double> training_samples(const Config& cfg, std::uint64_t seed);

}  // namespace retrainer::harness
