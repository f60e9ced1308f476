#include "retrainer/nn/tensor.hpp"

#include <cassert>
#include <cmath>

namespace retrainer::nn {

void matvec(const Matrix& m, std::span<const double> x, std::span<double> y) {
  assert(static_cast<int>(x.size()) == m.cols);
  assert(static_cast<int>(y.size()) == m.rows);
  const double* a = m.a.data();
  const int tail = m.cols & ~3;
  for (int r = 0; r < m.rows; ++r) {
    const double* row = a + static_cast<std::size_t>(r) * m.cols;
    // Four independent accumulators break the reduction dependency chain.
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    int c = 0;
    for (; c < tail; c += 4) {
      acc0 += row[c] * x[c];
      acc1 += row[c + 1] * x[c + 1];
      acc2 += row[c + 2] * x[c + 2];
      acc3 += row[c + 3] * x[c + 3];
    }
    for (; c < m.cols; ++c) acc0 += row[c] * x[c];
    y[r] = (acc0 + acc1) + (acc2 + acc3);
  }
}

void matvec_transposed_add(const Matrix& m, std::span<const double> x, std::span<double> y) {
  assert(static_cast<int>(x.size()) == m.rows);
  assert(static_cast<int>(y.size()) == m.cols);
  const double* a = m.a.data();
  for (int r = 0; r < m.rows; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    const double* row = a + static_cast<std::size_t>(r) * m.cols;
    for (int c = 0; c < m.cols; ++c) y[c] += xr * row[c];
  }
}

void outer_add(Matrix& g, std::span<const double> x, std::span<const double> y) {
  assert(static_cast<int>(x.size()) == g.rows);
  assert(static_cast<int>(y.size()) == g.cols);
  double* a = g.a.data();
  for (int r = 0; r < g.rows; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    double* row = a + static_cast<std::size_t>(r) * g.cols;
    for (int c = 0; c < g.cols; ++c) row[c] += xr * y[c];
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void glorot_init(Matrix& m, int fan_in, int fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / (fan_in + fan_out));
  for (auto& v : m.a) v = rng.uniform(-bound, bound);
}

std::size_t total_size(const ParamRefs& refs) {
  std::size_t n = 0;
  for (const auto& r : refs) n += r.size();
  return n;
}

}  // namespace retrainer::nn
