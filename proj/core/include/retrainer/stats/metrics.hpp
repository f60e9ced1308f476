#pragma once

#include <span>

namespace retrainer::stats {

// Root mean squared error. Throws ShapeError on length mismatch and
// DomainError on empty input.
double rmse(std::span<const double> pred, std::span<const double> actual);

// Percentile by the nearest-rank rule on a copy of the data, q in [0, 100].
double percentile(std::span<const double> values, double q);

}  // namespace retrainer::stats
