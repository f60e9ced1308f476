#pragma once

// Literal transcriptions of the two windowed decision procedures, written
// directly from their pseudocode shape: given the already-generated window,
// the per-sample scores, and the thresholds, decide retrain / warning. The
// detector implementations must agree with these verbatim rules on the same
// inputs.

#include <span>
#include <vector>

#include "retrainer/stats/ks.hpp"

namespace oracles {

// Decoder-based rule: P_value <- KST[gd_data, chunk]; retrain iff
// P_value < p_threshold.
inline bool alg1_retrain(std::span<const double> gd_data, std::span<const double> chunk,
                         double p_threshold) {
  const double p = retrainer::stats::ks_two_sample(gd_data, chunk).p_value;
  return p < p_threshold;
}

struct Alg2Decision {
  bool warning_zone = false;
  bool retrain = false;
};

// Discriminator + generator rule: any per-sample score outside [d_low,
// d_high] lands in the warning zone; KST of the generated data against the
// chunk decides retraining.
inline Alg2Decision alg2_decide(std::span<const double> y_predict, double d_low, double d_high,
                                std::span<const double> gg_data, std::span<const double> chunk,
                                double p_threshold) {
  Alg2Decision decision;
  for (std::size_t j = 0; j < y_predict.size(); ++j) {
    const bool in_range = y_predict[j] >= d_low && y_predict[j] <= d_high;
    if (!in_range) decision.warning_zone = true;
  }
  const double p = retrainer::stats::ks_two_sample(gg_data, chunk).p_value;
  decision.retrain = p < p_threshold;
  return decision;
}

}  // namespace oracles
