#include "retrainer/nn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "retrainer/errors.hpp"

namespace retrainer::nn {

namespace {
void check_pair(std::span<const double> a, std::span<const double> b, const char* op) {
  if (a.size() != b.size()) throw ShapeError(std::string(op) + ": length mismatch");
  if (a.empty()) throw DomainError(std::string(op) + ": empty input");
}
}  // namespace

double loss_mse(std::span<const double> pred, std::span<const double> actual) {
  check_pair(pred, actual, "loss_mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - actual[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.size());
}

Vector loss_mse_grad(std::span<const double> pred, std::span<const double> actual) {
  check_pair(pred, actual, "loss_mse");
  Vector g(pred.size());
  const double scale = 2.0 / static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) g[i] = scale * (pred[i] - actual[i]);
  return g;
}

double loss_bce(std::span<const double> pred, std::span<const double> target) {
  check_pair(pred, target, "loss_bce");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = std::clamp(pred[i], kBceEps, 1.0 - kBceEps);
    acc += -(target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p));
  }
  return acc / static_cast<double>(pred.size());
}

Vector loss_bce_grad(std::span<const double> pred, std::span<const double> target) {
  check_pair(pred, target, "loss_bce");
  Vector g(pred.size());
  const double scale = 1.0 / static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] <= kBceEps || pred[i] >= 1.0 - kBceEps) {
      // Inside the clamp the loss is flat in pred.
      g[i] = 0.0;
      continue;
    }
    const double p = pred[i];
    g[i] = scale * (p - target[i]) / (p * (1.0 - p));
  }
  return g;
}

double loss_gaussian_kl(std::span<const double> mu, std::span<const double> logvar) {
  if (mu.size() != logvar.size()) throw ShapeError("loss_gaussian_kl: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    acc += 0.5 * (mu[i] * mu[i] + std::exp(logvar[i]) - 1.0 - logvar[i]);
  }
  return acc;
}

void loss_gaussian_kl_grad(std::span<const double> mu, std::span<const double> logvar,
                           Vector& dmu, Vector& dlogvar) {
  if (mu.size() != logvar.size()) throw ShapeError("loss_gaussian_kl: length mismatch");
  dmu.assign(mu.size(), 0.0);
  dlogvar.assign(mu.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    dmu[i] = mu[i];
    dlogvar[i] = 0.5 * (std::exp(logvar[i]) - 1.0);
  }
}

}  // namespace retrainer::nn
