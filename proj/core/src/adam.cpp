#include "retrainer/nn/adam.hpp"

#include <cmath>

#include "retrainer/errors.hpp"

namespace retrainer::nn {

void AdamOptimizer::step(const ParamRefs& params, const ParamRefs& grads) {
  if (params.size() != grads.size()) throw ShapeError("adam: span count mismatch");
  const std::size_t n = total_size(params);
  if (n != total_size(grads)) throw ShapeError("adam: parameter/gradient size mismatch");
  if (m_.empty()) {
    m_.assign(n, 0.0);
    v_.assign(n, 0.0);
  } else if (m_.size() != n) {
    throw ShapeError("adam: parameter count changed between steps");
  }

  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));

  std::size_t off = 0;
  for (std::size_t s = 0; s < params.size(); ++s) {
    auto p = params[s];
    auto g = grads[s];
    if (p.size() != g.size()) throw ShapeError("adam: span shape mismatch");
    for (std::size_t i = 0; i < p.size(); ++i, ++off) {
      m_[off] = beta1_ * m_[off] + (1.0 - beta1_) * g[i];
      v_[off] = beta2_ * v_[off] + (1.0 - beta2_) * g[i] * g[i];
      const double mhat = m_[off] / bc1;
      const double vhat = v_[off] / bc2;
      p[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

void AdamOptimizer::reset() {
  t_ = 0;
  m_.clear();
  v_.clear();
}

}  // namespace retrainer::nn
