#include "retrainer/stats/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "retrainer/errors.hpp"

namespace retrainer::stats {

double rmse(std::span<const double> pred, std::span<const double> actual) {
  if (pred.size() != actual.size()) throw ShapeError("rmse: length mismatch");
  if (pred.empty()) throw DomainError("rmse: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - actual[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

double percentile(std::span<const double> values, double q) {
  if (values.empty()) throw DomainError("percentile: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = q / 100.0 * static_cast<double>(sorted.size());
  std::size_t idx = rank <= 1.0 ? 0 : static_cast<std::size_t>(std::ceil(rank)) - 1;
  if (idx >= sorted.size()) idx = sorted.size() - 1;
  return sorted[idx];
}

}  // namespace retrainer::stats
