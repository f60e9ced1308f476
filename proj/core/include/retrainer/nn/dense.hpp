#pragma once

#include <span>

#include "retrainer/nn/tensor.hpp"

namespace retrainer::nn {

enum class Activation { Sigmoid, Relu, Linear, Tanh };

double activate(Activation act, double x);
// Derivative expressed through the activated output y = act(x).
double activate_grad_from_output(Activation act, double y);

struct DenseCache {
  Vector input;
  Vector output;  // post-activation
};

struct DenseGrad {
  Matrix dw;
  Vector db;
};

// Fully connected layer, out = act(W in + b).
struct DenseLayer {
  Matrix w;  // out x in
  Vector b;  // out
  Activation act = Activation::Linear;

  DenseLayer() = default;
  DenseLayer(int in, int out, Activation a) : w(out, in), b(out, 0.0), act(a) {}

  int in_size() const { return w.cols; }
  int out_size() const { return w.rows; }

  void init(Rng& rng);

  // Throws ShapeError when |input| != in_size.
  Vector forward(std::span<const double> input, DenseCache* cache = nullptr) const;

  // dout is dL/d(output). Accumulates parameter gradients into g and returns
  // dL/d(input).
  Vector backward(const DenseCache& cache, std::span<const double> dout, DenseGrad& g) const;

  DenseGrad make_grad() const { return DenseGrad{Matrix(w.rows, w.cols), Vector(b.size(), 0.0)}; }

  ParamRefs params();
  ParamRefs grad_refs(DenseGrad& g) const;
};

}  // namespace retrainer::nn
