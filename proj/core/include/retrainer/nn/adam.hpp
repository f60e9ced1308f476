#pragma once

#include <cstdint>

#include "retrainer/nn/tensor.hpp"

namespace retrainer::nn {

// Adaptive moment estimation with the usual defaults. Moment buffers are laid
// out flat in the order the parameter spans are presented; callers must keep
// that order stable across steps.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double lr = 0.001, double beta1 = 0.9, double beta2 = 0.999,
                         double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  double learning_rate() const { return lr_; }
  std::uint64_t steps_taken() const { return t_; }

  // params and grads must align span-by-span. Throws ShapeError otherwise.
  void step(const ParamRefs& params, const ParamRefs& grads);

  void reset();

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  std::uint64_t t_ = 0;
  Vector m_;
  Vector v_;
};

}  // namespace retrainer::nn
