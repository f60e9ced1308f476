#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace retrainer::genai {

// Closed interval of discriminator scores observed on training-distribution
// data; scores outside it raise the warning zone.
struct ScoreInterval {
  double low = 0.0;
  double high = 1.0;
};

struct TrainingReport {
  // Per-epoch losses: reconstruction/KL for the VAE, generator/discriminator
  // for the GAN.
  std::vector<double> loss_primary;
  std::vector<double> loss_secondary;
  std::size_t epochs_run = 0;
  std::size_t calibration_samples = 0;
  double p_kstest = 0.0;
  std::optional<ScoreInterval> d_score;
  std::vector<std::string> warnings;
};

}  // namespace retrainer::genai
