#pragma once

#include <span>
#include <vector>

namespace retrainer::stats {

// Right-continuous empirical CDF: F(x) = #{samples <= x} / n.
class Ecdf {
 public:
  explicit Ecdf(std::span<const double> samples);

  double operator()(double x) const;
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

enum class KsMethod { Exact, Asymptotic };

struct KsResult {
  double statistic = 0.0;  // sup_x |F_a(x) - F_b(x)|
  double p_value = 1.0;
  KsMethod method = KsMethod::Exact;
};

// Both samples at or below this size get the exact permutation p-value;
// C(24,12) ~ 2.7M label assignments is still cheap to count.
inline constexpr int kKsExactCap = 12;

// Two-sided two-sample Kolmogorov-Smirnov test.
//
// The statistic is the ECDF sup-difference evaluated at every distinct pooled
// value. The exact p-value conditions on the pooled multiset (ties are kept
// as tie groups) and counts, over all C(n+m, n) equally likely label
// assignments, how many reach a sup-difference at least as large as observed.
// Above the exact cap the Kolmogorov asymptotic tail
//   p = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),  lambda = D sqrt(nm/(n+m))
// is used instead.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       int exact_cap = kKsExactCap);

// Exposed for reuse by the asymptotic-only path and tests.
double ks_asymptotic_p(double d, std::size_t n, std::size_t m);

}  // namespace retrainer::stats
