#include "retrainer/nn/dense.hpp"

#include <cmath>
#include <string>

#include "retrainer/errors.hpp"

namespace retrainer::nn {

double activate(Activation act, double x) {
  switch (act) {
    case Activation::Sigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case Activation::Relu:
      return x > 0.0 ? x : 0.0;
    case Activation::Tanh:
      return std::tanh(x);
    case Activation::Linear:
      return x;
  }
  return x;
}

double activate_grad_from_output(Activation act, double y) {
  switch (act) {
    case Activation::Sigmoid:
      return y * (1.0 - y);
    case Activation::Relu:
      return y > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh:
      return 1.0 - y * y;
    case Activation::Linear:
      return 1.0;
  }
  return 1.0;
}

void DenseLayer::init(Rng& rng) {
  glorot_init(w, in_size(), out_size(), rng);
  for (auto& v : b) v = 0.0;
}

Vector DenseLayer::forward(std::span<const double> input, DenseCache* cache) const {
  if (static_cast<int>(input.size()) != in_size()) {
    throw ShapeError("dense forward: input length " + std::to_string(input.size()) +
                     " does not match layer in-size " + std::to_string(in_size()));
  }
  Vector out(out_size());
  matvec(w, input, out);
  for (int r = 0; r < out_size(); ++r) out[r] = activate(act, out[r] + b[r]);
  if (cache) {
    cache->input.assign(input.begin(), input.end());
    cache->output = out;
  }
  return out;
}

Vector DenseLayer::backward(const DenseCache& cache, std::span<const double> dout, DenseGrad& g) const {
  if (static_cast<int>(dout.size()) != out_size()) {
    throw ShapeError("dense backward: gradient length mismatch");
  }
  Vector dpre(out_size());
  for (int r = 0; r < out_size(); ++r) {
    dpre[r] = dout[r] * activate_grad_from_output(act, cache.output[r]);
  }
  outer_add(g.dw, dpre, cache.input);
  axpy(1.0, dpre, g.db);
  Vector din(in_size(), 0.0);
  matvec_transposed_add(w, dpre, din);
  return din;
}

ParamRefs DenseLayer::params() {
  return {std::span<double>(w.a), std::span<double>(b)};
}

ParamRefs DenseLayer::grad_refs(DenseGrad& g) const {
  return {std::span<double>(g.dw.a), std::span<double>(g.db)};
}

}  // namespace retrainer::nn
