#pragma once

// Direct textbook LOF evaluation from the full distance matrix. No neighbor
// search structures, no sorting shortcuts; every quantity is computed from
// its definition so this can stand against the optimized implementation.

#include <cmath>
#include <limits>
#include <vector>

namespace oracles {

inline std::vector<double> lof_bruteforce(const std::vector<std::vector<double>>& points, int k) {
  const int n = static_cast<int>(points.size());
  auto dist = [&](int i, int j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < points[i].size(); ++d) {
      const double diff = points[i][d] - points[j][d];
      acc += diff * diff;
    }
    return std::sqrt(acc);
  };

  // k-distance(p): the k-th smallest distance to another point.
  std::vector<double> kdist(n);
  for (int p = 0; p < n; ++p) {
    std::vector<double> ds;
    for (int o = 0; o < n; ++o) {
      if (o != p) ds.push_back(dist(p, o));
    }
    std::sort(ds.begin(), ds.end());
    kdist[p] = ds[k - 1];
  }

  // N_k(p): every other point within the k-distance.
  std::vector<std::vector<int>> nbh(n);
  for (int p = 0; p < n; ++p) {
    for (int o = 0; o < n; ++o) {
      if (o != p && dist(p, o) <= kdist[p]) nbh[p].push_back(o);
    }
  }

  // lrd(p) = |N_k(p)| / sum reach-dist_k(p, o), with reach-dist_k(p, o) =
  // max(k-distance(o), d(p, o)).
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lrd(n);
  for (int p = 0; p < n; ++p) {
    double reach = 0.0;
    for (int o : nbh[p]) reach += std::max(kdist[o], dist(p, o));
    lrd[p] = reach > 0.0 ? static_cast<double>(nbh[p].size()) / reach : inf;
  }

  std::vector<double> lof(n);
  for (int p = 0; p < n; ++p) {
    double acc = 0.0;
    for (int o : nbh[p]) {
      if (std::isinf(lrd[o]) && std::isinf(lrd[p])) {
        acc += 1.0;
      } else {
        acc += lrd[o] / lrd[p];
      }
    }
    lof[p] = acc / static_cast<double>(nbh[p].size());
  }
  return lof;
}

}  // namespace oracles
