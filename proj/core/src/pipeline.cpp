#include "retrainer/harness/pipeline.hpp"

#include <algorithm>

#include "retrainer/errors.hpp"
#include "retrainer/rng.hpp"
#include "retrainer/stream/csv.hpp"

namespace retrainer::harness {

std::vector<std::vector<double>> chop_windows(std::span<const double> samples, int window_size) {
  std::vector<std::vector<double>> windows;
  const std::size_t ws = static_cast<std::size_t>(window_size);
  for (std::size_t start = 0; start + ws <= samples.size(); start += ws) {
    windows.emplace_back(samples.begin() + static_cast<std::ptrdiff_t>(start),
                         samples.begin() + static_cast<std::ptrdiff_t>(start + ws));
  }
  return windows;
}

std::vector<double> training_samples(const Config& cfg, std::uint64_t seed) {
  if (cfg.csv_path) {
    auto series = stream::load_dataset(*cfg.csv_path, cfg.csv_schema, cfg.csv_slice,
                                       cfg.tick_period_ms);
    // Replayed datasets train on their leading half and replay in full.
    series.samples.resize(std::max<std::size_t>(series.samples.size() / 2, 1));
    return series.samples;
  }
  stream::ScenarioSpec spec = cfg.training;
  spec.seed = SeedSequence(seed).derive("training-stream");
  return stream::build_scenario(spec).samples;
}

TrainedBundle train_models(const Config& cfg, std::uint64_t seed) {
  const SeedSequence seeds(seed);
  TrainedBundle bundle;

  auto samples = training_samples(cfg, seed);
  if (samples.size() < static_cast<std::size_t>(cfg.window_size) * cfg.vae.min_windows) {
    throw TrainingError("training stream too short: " + std::to_string(samples.size()) +
                        " samples for window size " + std::to_string(cfg.window_size));
  }

  bundle.bounds = stream::bounds_of(samples);
  const auto normalized = stream::normalize(samples, bundle.bounds);
  const auto windows = chop_windows(normalized, cfg.window_size);

  genai::VaeConfig vae_cfg = cfg.vae;
  vae_cfg.seed = seeds.derive("vae");
  auto [vae, vae_report] = genai::vae_train(windows, vae_cfg);
  vae.bounds = bundle.bounds;
  bundle.vae = std::make_shared<genai::VaeModel>(std::move(vae));
  bundle.vae_report = std::move(vae_report);

  genai::GanConfig gan_cfg = cfg.gan;
  gan_cfg.seed = seeds.derive("gan");
  auto [gan, gan_report] = genai::gan_train(windows, gan_cfg);
  gan.bounds = bundle.bounds;
  bundle.gan = std::make_shared<genai::GanModel>(std::move(gan));
  bundle.gan_report = std::move(gan_report);

  forecast::ForecasterConfig f_cfg = cfg.forecaster;
  f_cfg.seed = seeds.derive("forecaster");
  bundle.forecaster = forecast::train_forecaster(samples, f_cfg, &bundle.forecaster_report);

  const auto ref_count = static_cast<std::ptrdiff_t>(std::min<std::size_t>(samples.size(), 500));
  bundle.lof_reference = std::make_shared<stats::LofReference>(
      std::vector<double>(samples.end() - ref_count, samples.end()), stats::kLofDefaultK);

  bundle.serving_warmup.assign(samples.end() - cfg.forecaster.lookback, samples.end());
  return bundle;
}

}  // namespace retrainer::harness
