#include "retrainer/stats/ks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "retrainer/errors.hpp"

namespace retrainer::stats {

Ecdf::Ecdf(std::span<const double> samples) : sorted_(samples.begin(), samples.end()) {
  if (sorted_.empty()) throw DomainError("ecdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

namespace {

// Pooled tie groups: for every distinct pooled value, how many came from a
// and how many from b.
struct TieGroup {
  int from_a = 0;
  int from_b = 0;
};

std::vector<TieGroup> pooled_groups(std::span<const double> a, std::span<const double> b) {
  std::vector<std::pair<double, int>> pooled;
  pooled.reserve(a.size() + b.size());
  for (double v : a) pooled.emplace_back(v, 0);
  for (double v : b) pooled.emplace_back(v, 1);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<TieGroup> groups;
  for (std::size_t i = 0; i < pooled.size();) {
    TieGroup g;
    const double v = pooled[i].first;
    for (; i < pooled.size() && pooled[i].first == v; ++i) {
      if (pooled[i].second == 0) {
        ++g.from_a;
      } else {
        ++g.from_b;
      }
    }
    groups.push_back(g);
  }
  return groups;
}

// Integer-scaled statistic: max over group boundaries of |i*m - j*n| where
// (i, j) are cumulative counts from a and b. D = c / (n*m).
std::int64_t statistic_counts(const std::vector<TieGroup>& groups, std::int64_t n, std::int64_t m) {
  std::int64_t i = 0;
  std::int64_t j = 0;
  std::int64_t c = 0;
  for (const auto& g : groups) {
    i += g.from_a;
    j += g.from_b;
    const std::int64_t boundary = std::abs(i * m - j * n);
    c = std::max(c, boundary);
  }
  return c;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

// Counts label assignments whose running boundary counts never reach c_obs,
// walking the tie groups in pooled order. Counts stay below C(24,12), exact
// in a double.
double exact_p_from_groups(const std::vector<TieGroup>& groups, int n, int m,
                           std::int64_t c_obs) {
  if (c_obs <= 0) return 1.0;
  const int total_groups = static_cast<int>(groups.size());
  // ways[i] = number of prefix labelings with i samples assigned to a that
  // kept every boundary strictly below c_obs.
  std::vector<double> ways(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> next(static_cast<std::size_t>(n) + 1, 0.0);
  ways[0] = 1.0;
  int processed = 0;
  for (int t = 0; t < total_groups; ++t) {
    const int g = groups[t].from_a + groups[t].from_b;
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i <= std::min(processed, n); ++i) {
      if (ways[i] == 0.0) continue;
      for (int k = 0; k <= g; ++k) {
        const int ni = i + k;
        if (ni > n) break;
        const int nj = processed + g - ni;
        if (nj < 0 || nj > m) continue;
        const std::int64_t boundary =
            std::abs(static_cast<std::int64_t>(ni) * m - static_cast<std::int64_t>(nj) * n);
        if (boundary >= c_obs) continue;
        next[ni] += ways[i] * binomial(g, k);
      }
    }
    ways.swap(next);
    processed += g;
  }
  const double surviving = ways[n];
  const double total = binomial(n + m, n);
  double p = 1.0 - surviving / total;
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

double ks_asymptotic_p(double d, std::size_t n, std::size_t m) {
  const double effective = static_cast<double>(n) * static_cast<double>(m) /
                           static_cast<double>(n + m);
  const double lambda = d * std::sqrt(effective);
  if (lambda < 1e-12) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, int exact_cap) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const auto groups = pooled_groups(a, b);
  const std::int64_t c = statistic_counts(groups, n, m);

  KsResult r;
  r.statistic = static_cast<double>(c) / (static_cast<double>(n) * static_cast<double>(m));
  if (n <= exact_cap && m <= exact_cap) {
    r.method = KsMethod::Exact;
    r.p_value = exact_p_from_groups(groups, n, m, c);
  } else {
    r.method = KsMethod::Asymptotic;
    r.p_value = ks_asymptotic_p(r.statistic, a.size(), b.size());
  }
  return r;
}

}  // namespace retrainer::stats
