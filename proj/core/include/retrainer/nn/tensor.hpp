#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "retrainer/rng.hpp"

namespace retrainer::nn {

using Vector = std::vector<double>;

// Dense row-major matrix. Small enough models that a flat vector plus
// hand-rolled kernels beats pulling in a linear-algebra dependency.
struct Matrix {
  int rows = 0;
  int cols = 0;
  Vector a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
  std::span<double> row(int r) { return {a.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
  std::span<const double> row(int r) const { return {a.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }

  void fill(double v) { a.assign(a.size(), v); }
};

// y = M x
void matvec(const Matrix& m, std::span<const double> x, std::span<double> y);
// y += M^T x  (used by backward passes for input gradients)
void matvec_transposed_add(const Matrix& m, std::span<const double> x, std::span<double> y);
// G += outer(x, y)  with G shaped rows=|x|, cols=|y|
void outer_add(Matrix& g, std::span<const double> x, std::span<const double> y);

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Glorot-uniform initialization in +-sqrt(6/(fan_in+fan_out)).
void glorot_init(Matrix& m, int fan_in, int fan_out, Rng& rng);

// Models expose their trainable storage as an ordered list of spans; the
// optimizer and the serializer both walk this order.
using ParamRefs = std::vector<std::span<double>>;

std::size_t total_size(const ParamRefs& refs);

}  // namespace retrainer::nn
