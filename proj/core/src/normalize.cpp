#include "retrainer/stream/normalize.hpp"

#include <algorithm>

#include "retrainer/errors.hpp"

namespace retrainer::stream {

Bounds bounds_of(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("bounds_of: empty sample");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  return Bounds{*lo, *hi};
}

namespace {
void check(const Bounds& b) {
  if (!(b.max > b.min)) throw ConfigError("normalization bounds are degenerate (max <= min)");
}
}  // namespace

double normalize(double value, const Bounds& bounds) {
  check(bounds);
  const double u = (value - bounds.min) / (bounds.max - bounds.min);
  return std::clamp(u, 0.0, 1.0);
}

std::vector<double> normalize(std::span<const double> samples, const Bounds& bounds) {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = normalize(samples[i], bounds);
  return out;
}

double denormalize(double unit_value, const Bounds& bounds) {
  check(bounds);
  return bounds.min + unit_value * (bounds.max - bounds.min);
}

}  // namespace retrainer::stream
