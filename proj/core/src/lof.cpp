#include "retrainer/stats/lof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "retrainer/errors.hpp"

namespace retrainer::stats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

struct Neighborhood {
  double k_distance = 0.0;
  std::vector<int> members;  // all o != p with d(p,o) <= k_distance
};

// Shared tail of the computation once neighborhoods are known.
std::vector<LofScore> scores_from_neighborhoods(const std::vector<Neighborhood>& nbh,
                                                const std::vector<std::vector<double>>& dist_to,
                                                int k) {
  const std::size_t n = nbh.size();
  std::vector<double> lrd(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    double reach_sum = 0.0;
    for (int o : nbh[p].members) {
      reach_sum += std::max(nbh[o].k_distance, dist_to[p][o]);
    }
    lrd[p] = reach_sum > 0.0 ? static_cast<double>(nbh[p].members.size()) / reach_sum : kInf;
  }
  std::vector<LofScore> out(n);
  for (std::size_t p = 0; p < n; ++p) {
    double acc = 0.0;
    for (int o : nbh[p].members) {
      if (std::isinf(lrd[o]) && std::isinf(lrd[p])) {
        acc += 1.0;  // coincident points are equally dense
      } else {
        acc += lrd[o] / lrd[p];
      }
    }
    out[p].factor = acc / static_cast<double>(nbh[p].members.size());
    out[p].k = k;
  }
  return out;
}

}  // namespace

std::vector<LofScore> lof(const std::vector<std::vector<double>>& points, int k) {
  const int n = static_cast<int>(points.size());
  if (k < 1) throw DomainError("lof: k must be >= 1");
  if (n <= k) throw DomainError("lof: need more points than neighbors (k < n)");

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = euclidean(points[i], points[j]);
      dist[i][j] = d;
      dist[j][i] = d;
    }
  }

  std::vector<Neighborhood> nbh(n);
  std::vector<double> row;
  for (int p = 0; p < n; ++p) {
    row.clear();
    for (int o = 0; o < n; ++o) {
      if (o != p) row.push_back(dist[p][o]);
    }
    std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
    const double kd = row[k - 1];
    nbh[p].k_distance = kd;
    for (int o = 0; o < n; ++o) {
      if (o != p && dist[p][o] <= kd) nbh[p].members.push_back(o);
    }
  }
  return scores_from_neighborhoods(nbh, dist, k);
}

std::vector<LofScore> lof(std::span<const double> points, int k) {
  std::vector<std::vector<double>> as_vectors(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) as_vectors[i] = {points[i]};
  return lof(as_vectors, k);
}

LofReference::LofReference(std::vector<double> reference, int k) : sorted_(std::move(reference)) {
  if (sorted_.empty()) throw DomainError("lof reference: empty reference set");
  k_ = lof_auto_k(sorted_.size(), k);
  if (k_ < 1) throw DomainError("lof reference: need at least two reference points");
  std::sort(sorted_.begin(), sorted_.end());

  const int n = static_cast<int>(sorted_.size());
  k_distance_.assign(n, 0.0);
  lrd_.assign(n, 0.0);

  // k nearest by value are a contiguous window around each sorted position.
  auto kth_distance = [&](double v, int self_pos) {
    int l = self_pos;
    int r = self_pos;
    double kd = 0.0;
    for (int taken = 0; taken < k_; ++taken) {
      const double dl = l > 0 ? v - sorted_[l - 1] : kInf;
      const double dr = r + 1 < n ? sorted_[r + 1] - v : kInf;
      if (dl <= dr) {
        --l;
        kd = std::max(kd, dl);
      } else {
        ++r;
        kd = std::max(kd, dr);
      }
    }
    return kd;
  };

  for (int p = 0; p < n; ++p) k_distance_[p] = kth_distance(sorted_[p], p);

  for (int p = 0; p < n; ++p) {
    const double v = sorted_[p];
    const double kd = k_distance_[p];
    const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), v - kd);
    const auto hi = std::upper_bound(sorted_.begin(), sorted_.end(), v + kd);
    double reach_sum = 0.0;
    int count = 0;
    for (auto it = lo; it != hi; ++it) {
      const int o = static_cast<int>(it - sorted_.begin());
      if (o == p) continue;
      reach_sum += std::max(k_distance_[o], std::abs(v - *it));
      ++count;
    }
    lrd_[p] = reach_sum > 0.0 ? static_cast<double>(count) / reach_sum : kInf;
  }
}

double LofReference::score(double query) const {
  const int n = static_cast<int>(sorted_.size());
  // k-distance of the query with respect to the reference population.
  const int pos = static_cast<int>(std::lower_bound(sorted_.begin(), sorted_.end(), query) -
                                   sorted_.begin());
  int l = pos;      // first index not yet taken on the left is l-1
  int r = pos - 1;  // first on the right is r+1
  double kd = 0.0;
  for (int taken = 0; taken < k_; ++taken) {
    const double dl = l > 0 ? query - sorted_[l - 1] : kInf;
    const double dr = r + 1 < n ? sorted_[r + 1] - query : kInf;
    if (dl <= dr) {
      --l;
      kd = std::max(kd, dl);
    } else {
      ++r;
      kd = std::max(kd, dr);
    }
  }

  const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), query - kd);
  const auto hi = std::upper_bound(sorted_.begin(), sorted_.end(), query + kd);
  double reach_sum = 0.0;
  double lrd_neighbor_sum = 0.0;
  int count = 0;
  bool neighbor_inf = false;
  for (auto it = lo; it != hi; ++it) {
    const int o = static_cast<int>(it - sorted_.begin());
    reach_sum += std::max(k_distance_[o], std::abs(query - *it));
    if (std::isinf(lrd_[o])) {
      neighbor_inf = true;
    } else {
      lrd_neighbor_sum += lrd_[o];
    }
    ++count;
  }
  if (count == 0) return kInf;
  const double lrd_query = reach_sum > 0.0 ? static_cast<double>(count) / reach_sum : kInf;
  if (std::isinf(lrd_query)) {
    // Query coincides with a saturated cluster; equal density by convention.
    return 1.0;
  }
  if (neighbor_inf) return kInf;
  return (lrd_neighbor_sum / static_cast<double>(count)) / lrd_query;
}

}  // namespace retrainer::stats
