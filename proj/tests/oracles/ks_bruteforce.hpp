#pragma once

// Brute-force two-sample KS p-value: enumerate every labeling of the pooled
// sample and count how many reach the observed statistic. Kept deliberately
// independent of the library implementation: no shared statistic code, the
// sup-difference is recomputed per labeling from scratch.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace oracles {

struct BruteKs {
  double statistic = 0.0;
  double p_value = 1.0;
};

inline BruteKs ks_bruteforce(std::span<const double> a, std::span<const double> b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());

  // Observed integer statistic: walk the sorted pool with the true labels.
  auto stat_for = [&](const std::vector<int>& labels) {
    // labels[i] = 1 when pooled[i] belongs to sample a
    std::int64_t ia = 0, ib = 0, c = 0;
    for (std::size_t i = 0; i < pooled.size();) {
      std::size_t j = i;
      while (j < pooled.size() && pooled[j] == pooled[i]) {
        if (labels[j]) {
          ++ia;
        } else {
          ++ib;
        }
        ++j;
      }
      const std::int64_t d = std::abs(ia * m - ib * n);
      c = std::max(c, d);
      i = j;
    }
    return c;
  };

  // True labeling: mark which positions of the sorted pool came from a,
  // consuming duplicates greedily (any assignment of tied positions gives the
  // same statistic).
  std::vector<int> truth(pooled.size(), 0);
  {
    std::vector<double> rest(a.begin(), a.end());
    std::sort(rest.begin(), rest.end());
    std::size_t next = 0;
    for (std::size_t i = 0; i < pooled.size() && next < rest.size(); ++i) {
      if (!truth[i] && pooled[i] == rest[next]) {
        truth[i] = 1;
        ++next;
      }
    }
  }
  const std::int64_t observed = stat_for(truth);

  // Enumerate all C(n+m, n) labelings.
  std::vector<int> labels(pooled.size(), 0);
  std::fill(labels.begin(), labels.begin() + n, 1);
  std::sort(labels.begin(), labels.end());
  std::uint64_t total = 0, at_least = 0;
  do {
    ++total;
    if (stat_for(labels) >= observed) ++at_least;
  } while (std::next_permutation(labels.begin(), labels.end()));

  BruteKs r;
  r.statistic = static_cast<double>(observed) / (static_cast<double>(n) * m);
  r.p_value = static_cast<double>(at_least) / static_cast<double>(total);
  return r;
}

}  // namespace oracles
