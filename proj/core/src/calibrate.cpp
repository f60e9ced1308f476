#include "retrainer/genai/calibrate.hpp"

#include <string>

#include "retrainer/errors.hpp"
#include "retrainer/rng.hpp"
#include "retrainer/stats/ks.hpp"
#include "retrainer/stats/metrics.hpp"

namespace retrainer::genai {

CalibrationResult calibrate_thresholds(const std::vector<std::vector<double>>& held_out,
                                       const GenerateFn& generate_fn, const ScoreFn& score_fn,
                                       const CalibrationConfig& cfg) {
  if (held_out.size() < cfg.min_windows) {
    throw CalibrationError("calibration needs at least " + std::to_string(cfg.min_windows) +
                           " held-out windows, got " + std::to_string(held_out.size()));
  }

  const SeedSequence seeds(cfg.seed);
  std::vector<double> p_values;
  p_values.reserve(held_out.size() * static_cast<std::size_t>(cfg.draws_per_window));
  for (std::size_t w = 0; w < held_out.size(); ++w) {
    for (int r = 0; r < cfg.draws_per_window; ++r) {
      const auto generated =
          generate_fn(seeds.derive("calib", w * static_cast<std::size_t>(cfg.draws_per_window) + r));
      p_values.push_back(stats::ks_two_sample(generated, held_out[w]).p_value);
    }
  }

  CalibrationResult result;
  result.samples_used = p_values.size();
  result.p_kstest = stats::percentile(p_values, cfg.p_percentile);

  if (score_fn) {
    std::vector<double> scores;
    for (const auto& w : held_out) {
      const auto s = score_fn(w);
      scores.insert(scores.end(), s.begin(), s.end());
    }
    ScoreInterval interval;
    interval.low = stats::percentile(scores, cfg.score_low_percentile);
    interval.high = stats::percentile(scores, cfg.score_high_percentile);
    result.d_score = interval;
  }
  return result;
}

}  // namespace retrainer::genai
