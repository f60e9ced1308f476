#pragma once

#include <span>

#include "retrainer/nn/tensor.hpp"

namespace retrainer::nn {

// Probabilities are clamped into [kBceEps, 1 - kBceEps] before the logs so a
// saturated sigmoid cannot produce infinities.
inline constexpr double kBceEps = 1e-7;

// Mean squared error. Throws DomainError on empty input, ShapeError on
// length mismatch.
double loss_mse(std::span<const double> pred, std::span<const double> actual);
// dL/dpred for loss_mse.
Vector loss_mse_grad(std::span<const double> pred, std::span<const double> actual);

// Mean binary cross-entropy over elementwise (p, t) pairs, t in {0,1}.
double loss_bce(std::span<const double> pred, std::span<const double> target);
Vector loss_bce_grad(std::span<const double> pred, std::span<const double> target);

// KL(N(mu, e^logvar) || N(0, I)) summed over dimensions:
//   sum 0.5 (mu^2 + e^logvar - 1 - logvar)
double loss_gaussian_kl(std::span<const double> mu, std::span<const double> logvar);
// Gradients w.r.t. mu and logvar.
void loss_gaussian_kl_grad(std::span<const double> mu, std::span<const double> logvar,
                           Vector& dmu, Vector& dlogvar);

}  // namespace retrainer::nn
