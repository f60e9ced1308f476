#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "retrainer/genai/report.hpp"

namespace retrainer::genai {

struct CalibrationConfig {
  std::size_t min_windows = 20;
  int draws_per_window = 8;        // generated windows paired with each held-out window
  double p_percentile = 0.5;       // lower tail of the held-out p-value distribution
  double score_low_percentile = 0.5;
  double score_high_percentile = 99.5;
  std::uint64_t seed = 1;
};

struct CalibrationResult {
  double p_kstest = 0.0;
  std::optional<ScoreInterval> d_score;
  std::size_t samples_used = 0;
};

using GenerateFn = std::function<std::vector<double>(std::uint64_t seed)>;
using ScoreFn = std::function<std::vector<double>(std::span<const double> window)>;

// Fits the trigger threshold to the model itself: pairs each held-out window
// with freshly generated data, collects the KS p-values, and takes a low
// percentile so the stationary false-trigger rate is the percentile by
// construction. When score_fn is given (GAN), also returns the central
// percentile interval of per-sample discriminator scores on observed data.
//
// Throws CalibrationError when fewer than min_windows held-out windows are
// available.
CalibrationResult calibrate_thresholds(const std::vector<std::vector<double>>& held_out,
                                       const GenerateFn& generate_fn, const ScoreFn& score_fn,
                                       const CalibrationConfig& cfg);

}  // namespace retrainer::genai
