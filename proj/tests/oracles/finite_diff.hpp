#pragma once

// Central-difference gradient checking, independent of the backward passes it
// verifies. Perturbs every parameter in place through the model's own span
// list and compares against the analytic gradient.

#include <cmath>
#include <functional>
#include <vector>

#include "retrainer/nn/tensor.hpp"

namespace oracles {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

// loss() must evaluate the model at its current parameters. analytic must be
// laid out exactly like params.
inline GradCheckResult finite_difference_check(const retrainer::nn::ParamRefs& params,
                                               const retrainer::nn::ParamRefs& analytic,
                                               const std::function<double()>& loss,
                                               double eps = 1e-5) {
  GradCheckResult result;
  for (std::size_t s = 0; s < params.size(); ++s) {
    auto p = params[s];
    auto g = analytic[s];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p[i];
      p[i] = saved + eps;
      const double up = loss();
      p[i] = saved - eps;
      const double down = loss();
      p[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double denom = std::max({std::abs(numeric), std::abs(g[i]), 1.0});
      result.max_rel_error = std::max(result.max_rel_error, std::abs(numeric - g[i]) / denom);
      ++result.checked;
    }
  }
  return result;
}

}  // namespace oracles
