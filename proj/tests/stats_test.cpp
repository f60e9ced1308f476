#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles/ks_bruteforce.hpp"
#include "oracles/lof_bruteforce.hpp"
#include "retrainer/errors.hpp"
#include "retrainer/rng.hpp"
#include "retrainer/stats/ks.hpp"
#include "retrainer/stats/lof.hpp"
#include "retrainer/stats/metrics.hpp"

using namespace retrainer;

namespace {

std::vector<double> random_sample(std::size_t n, Rng& rng, double lo = 0.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

constexpr double kChoose2010 = 184756.0;

}  // namespace

TEST_CASE("ecdf: single sample step") {
  const stats::Ecdf f(std::vector<double>{5.0});
  CHECK(f(4.999) == 0.0);
  CHECK(f(5.0) == 1.0);
  CHECK(f(100.0) == 1.0);
}

TEST_CASE("ecdf: interior point and duplicates") {
  const stats::Ecdf f(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(f(2.0) == doctest::Approx(2.0 / 3.0));
  const stats::Ecdf g(std::vector<double>{1.0, 1.0, 2.0});
  CHECK(g(1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(g(2.0) == 1.0);
}

TEST_CASE("ecdf: empty sample throws") {
  CHECK_THROWS_AS(stats::Ecdf(std::vector<double>{}), DomainError);
}

TEST_CASE("ks: identical samples give D=0, p=1") {
  const std::vector<double> a{3.0, 1.0, 2.0};
  const auto r = stats::ks_two_sample(a, a);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("ks: fully separated samples of ten") {
  std::vector<double> a(10), b(10);
  for (int i = 0; i < 10; ++i) {
    a[i] = 1.0 + i;
    b[i] = 100.0 + i;
  }
  const auto r = stats::ks_two_sample(a, b);
  CHECK(r.statistic == 1.0);
  CHECK(r.method == stats::KsMethod::Exact);
  CHECK(r.p_value == doctest::Approx(2.0 / kChoose2010).epsilon(1e-12));
}

TEST_CASE("ks: hand-computed one-third case") {
  const auto r = stats::ks_two_sample(std::vector<double>{1.0, 2.0, 3.0},
                                      std::vector<double>{2.0, 3.0, 4.0});
  CHECK(r.statistic == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ks: empty input throws") {
  CHECK_THROWS_AS(stats::ks_two_sample(std::vector<double>{}, std::vector<double>{1.0}),
                  DomainError);
}

TEST_CASE("ks: symmetry in both statistic and p-value") {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_sample(4 + trial % 7, rng);
    const auto b = random_sample(3 + (trial * 5) % 8, rng);
    const auto r1 = stats::ks_two_sample(a, b);
    const auto r2 = stats::ks_two_sample(b, a);
    CHECK(r1.statistic == r2.statistic);
    CHECK(r1.p_value == r2.p_value);
  }
}

TEST_CASE("ks: invariant under a shared strictly increasing transform") {
  Rng rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_sample(8, rng);
    const auto b = random_sample(10, rng);
    auto f = [](double x) { return std::exp(3.0 * x) - 2.0; };
    std::vector<double> fa(a.size()), fb(b.size());
    std::transform(a.begin(), a.end(), fa.begin(), f);
    std::transform(b.begin(), b.end(), fb.begin(), f);
    const auto r1 = stats::ks_two_sample(a, b);
    const auto r2 = stats::ks_two_sample(fa, fb);
    CHECK(r1.statistic == doctest::Approx(r2.statistic).epsilon(1e-15));
    CHECK(r1.p_value == doctest::Approx(r2.p_value).epsilon(1e-12));
  }
}

TEST_CASE("ks: exact p matches brute-force enumeration for all n,m <= 8") {
  Rng rng(107);
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= 8; ++m) {
      for (int rep = 0; rep < 2; ++rep) {
        auto a = random_sample(static_cast<std::size_t>(n), rng);
        auto b = random_sample(static_cast<std::size_t>(m), rng);
        if (rep == 1 && n >= 2 && m >= 2) {
          // Force ties within and across the samples.
          a[1] = a[0];
          b[0] = a[0];
        }
        const auto mine = stats::ks_two_sample(a, b);
        const auto brute = oracles::ks_bruteforce(a, b);
        CAPTURE(n);
        CAPTURE(m);
        CAPTURE(rep);
        CHECK(mine.statistic == doctest::Approx(brute.statistic).epsilon(1e-15));
        CHECK(mine.p_value == doctest::Approx(brute.p_value).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("ks: exact p matches brute force on random ten-vs-ten cases") {
  Rng rng(109);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_sample(10, rng);
    auto b = random_sample(10, rng, 0.0, trial % 3 == 0 ? 0.4 : 1.0);
    const auto mine = stats::ks_two_sample(a, b);
    const auto brute = oracles::ks_bruteforce(a, b);
    CHECK(mine.method == stats::KsMethod::Exact);
    CHECK(mine.p_value == doctest::Approx(brute.p_value).epsilon(1e-12));
  }
}

TEST_CASE("ks: method switches to asymptotic above the exact cap") {
  Rng rng(113);
  const auto a = random_sample(13, rng);
  const auto b = random_sample(13, rng);
  CHECK(stats::ks_two_sample(a, b).method == stats::KsMethod::Asymptotic);
  const auto c = random_sample(12, rng);
  const auto d = random_sample(12, rng);
  CHECK(stats::ks_two_sample(c, d).method == stats::KsMethod::Exact);
}

TEST_CASE("ks: asymptotic p-values on same-distribution samples look uniform") {
  // 500-vs-500 draws from one distribution; the p-value sample itself is KS
  // tested against U(0,1) at the 1% level.
  Rng rng(127);
  std::vector<double> pvals;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_sample(500, rng);
    const auto b = random_sample(500, rng);
    pvals.push_back(stats::ks_two_sample(a, b).p_value);
  }
  std::sort(pvals.begin(), pvals.end());
  double d_stat = 0.0;
  const double n = static_cast<double>(pvals.size());
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    const double hi = static_cast<double>(i + 1) / n - pvals[i];
    const double lo = pvals[i] - static_cast<double>(i) / n;
    d_stat = std::max({d_stat, hi, lo});
  }
  // One-sample Kolmogorov critical value at alpha = 0.01.
  CHECK(d_stat < 1.628 / std::sqrt(n));
}

TEST_CASE("lof: uniform grid interior points sit near one") {
  std::vector<double> grid(60);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i);
  const auto scores = stats::lof(grid, 5);
  const auto brute = oracles::lof_bruteforce(
      [&] {
        std::vector<std::vector<double>> pts;
        for (double v : grid) pts.push_back({v});
        return pts;
      }(),
      5);
  for (std::size_t i = 10; i + 10 < grid.size(); ++i) {
    CHECK(scores[i].factor >= 0.9);
    CHECK(scores[i].factor <= 1.2);
    CHECK(scores[i].factor == doctest::Approx(brute[i]).epsilon(1e-9));
  }
}

TEST_CASE("lof: far point over a cluster scores much above one") {
  Rng rng(131);
  std::vector<double> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(rng.gaussian(0.0, 0.1));
  pts.push_back(10.0);  // 100x the cluster radius
  const auto scores = stats::lof(pts, 5);
  CHECK(scores.back().factor > 2.0);
}

TEST_CASE("lof: identical points all score one") {
  const std::vector<double> pts(12, 3.14);
  const auto scores = stats::lof(pts, 4);
  for (const auto& s : scores) CHECK(s.factor == 1.0);
}

TEST_CASE("lof: k out of range throws") {
  const std::vector<double> pts{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(stats::lof(pts, 3), DomainError);
  CHECK_THROWS_AS(stats::lof(pts, 0), DomainError);
}

TEST_CASE("lof: matches the brute-force formula on random instances") {
  Rng rng(137);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 20 + static_cast<int>(rng.integer(81));
    const int k = std::vector<int>{3, 10, 20}[trial % 3];
    std::vector<std::vector<double>> pts;
    const int dims = trial % 2 == 0 ? 1 : 2;
    for (int i = 0; i < n; ++i) {
      std::vector<double> p(dims);
      for (auto& v : p) v = rng.gaussian(0.0, 1.0);
      pts.push_back(std::move(p));
    }
    const auto mine = stats::lof(pts, k);
    const auto brute = oracles::lof_bruteforce(pts, k);
    for (int i = 0; i < n; ++i) {
      CHECK(mine[i].factor == doctest::Approx(brute[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("lof reference: stationary queries score low, shifted queries high") {
  Rng rng(139);
  std::vector<double> reference(500);
  for (auto& v : reference) v = rng.gaussian(20.0, 0.5);
  const stats::LofReference ref(reference, 20);
  int outliers = 0;
  for (int i = 0; i < 200; ++i) {
    if (ref.score(rng.gaussian(20.0, 0.5)) > 1.5) ++outliers;
  }
  CHECK(outliers < 10);
  CHECK(ref.score(24.0) > 1.5);
  CHECK(ref.score(15.0) > 1.5);
}

TEST_CASE("rmse: pinned values and errors") {
  CHECK(stats::rmse(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}) == 0.0);
  CHECK(stats::rmse(std::vector<double>{0.0, 0.0}, std::vector<double>{3.0, 4.0}) ==
        doctest::Approx(std::sqrt(12.5)));
  CHECK_THROWS_AS(stats::rmse(std::vector<double>{}, std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(stats::rmse(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                  ShapeError);
}

TEST_CASE("percentile: nearest-rank behavior") {
  const std::vector<double> v{5.0, 1.0, 3.0, 2.0, 4.0};
  CHECK(stats::percentile(v, 0.5) == 1.0);
  CHECK(stats::percentile(v, 50.0) == 3.0);
  CHECK(stats::percentile(v, 99.9) == 5.0);
  CHECK_THROWS_AS(stats::percentile(std::vector<double>{}, 50.0), DomainError);
}
