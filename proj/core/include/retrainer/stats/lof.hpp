#pragma once

#include <span>
#include <vector>

namespace retrainer::stats {

// Local Outlier Factor over a point set. Scores near 1 mean the point sits in
// a region as dense as its neighbors; scores well above 1 flag sparse
// surroundings. Distances are absolute differences in 1-D and Euclidean for
// vector points.
//
// Tie handling follows the textbook definition: the k-neighborhood contains
// every other point within the k-distance, so it can exceed k elements.
// Coincident points (zero reachability sums) are treated as equally dense,
// which pins their factor at 1.

struct LofScore {
  double factor = 1.0;
  int k = 0;
};

inline constexpr int kLofDefaultK = 20;

// Throws DomainError unless |points| > k >= 1. k is the requested neighbor
// count; callers wanting the "capped at n-1" behavior clamp before calling
// (see lof_auto_k).
std::vector<LofScore> lof(const std::vector<std::vector<double>>& points, int k);
std::vector<LofScore> lof(std::span<const double> points, int k);

inline int lof_auto_k(std::size_t n, int requested = kLofDefaultK) {
  const int cap = static_cast<int>(n) - 1;
  return requested > cap ? cap : requested;
}

// Frozen reference set for scoring fresh samples against training data.
// k-distances and local reachability densities of the reference points are
// precomputed; a query is scored exactly as LOF scores a new point with
// respect to that population.
class LofReference {
 public:
  LofReference(std::vector<double> reference, int k);

  double score(double query) const;
  int k() const { return k_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
  std::vector<double> k_distance_;  // aligned with sorted_
  std::vector<double> lrd_;         // aligned with sorted_
  int k_ = 0;
};

}  // namespace retrainer::stats
