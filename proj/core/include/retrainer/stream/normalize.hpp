#pragma once

#include <span>
#include <vector>

namespace retrainer::stream {

// Min-max bounds recorded at training time so samples can be mapped into the
// sigmoid-friendly unit interval and predictions mapped back out.
struct Bounds {
  double min = 0.0;
  double max = 1.0;
};

Bounds bounds_of(std::span<const double> samples);

// Clamped min-max scaling into [0, 1]. Throws ConfigError on degenerate
// bounds (max <= min).
double normalize(double value, const Bounds& bounds);
std::vector<double> normalize(std::span<const double> samples, const Bounds& bounds);

// Inverse for in-range values; clamped values cannot be recovered.
double denormalize(double unit_value, const Bounds& bounds);

}  // namespace retrainer::stream
