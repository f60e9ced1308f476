#include "retrainer/genai/vae.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "retrainer/errors.hpp"
#include "retrainer/nn/adam.hpp"
#include "retrainer/nn/loss.hpp"
#include "retrainer/rng.hpp"

namespace retrainer::genai {

namespace {

void validate_windows(const std::vector<std::vector<double>>& windows, int ws,
                      std::size_t min_windows) {
  if (windows.size() < min_windows) {
    throw TrainingError("vae_train: need at least " + std::to_string(min_windows) +
                        " windows, got " + std::to_string(windows.size()));
  }
  for (const auto& w : windows) {
    if (static_cast<int>(w.size()) != ws) {
      throw TrainingError("vae_train: window length " + std::to_string(w.size()) +
                          " does not match configured window size " + std::to_string(ws));
    }
    for (double v : w) {
      if (v < 0.0 || v > 1.0 || !std::isfinite(v)) {
        throw DomainError("vae_train: input values must be normalized to [0,1]");
      }
    }
  }
}

struct VaeGrads {
  nn::DenseGrad enc1, enc2, mu_head, logvar_head, dec1, dec2, dec_out;
};

nn::ParamRefs model_params(VaeModel& m) {
  nn::ParamRefs refs;
  for (auto* layer : {&m.enc1, &m.enc2, &m.mu_head, &m.logvar_head, &m.dec1, &m.dec2, &m.dec_out}) {
    auto p = layer->params();
    refs.insert(refs.end(), p.begin(), p.end());
  }
  return refs;
}

nn::ParamRefs grad_params(VaeModel& m, VaeGrads& g) {
  nn::ParamRefs refs;
  auto add = [&refs](nn::ParamRefs r) { refs.insert(refs.end(), r.begin(), r.end()); };
  add(m.enc1.grad_refs(g.enc1));
  add(m.enc2.grad_refs(g.enc2));
  add(m.mu_head.grad_refs(g.mu_head));
  add(m.logvar_head.grad_refs(g.logvar_head));
  add(m.dec1.grad_refs(g.dec1));
  add(m.dec2.grad_refs(g.dec2));
  add(m.dec_out.grad_refs(g.dec_out));
  return refs;
}

void zero_grads(VaeModel& m, VaeGrads& g) {
  g.enc1 = m.enc1.make_grad();
  g.enc2 = m.enc2.make_grad();
  g.mu_head = m.mu_head.make_grad();
  g.logvar_head = m.logvar_head.make_grad();
  g.dec1 = m.dec1.make_grad();
  g.dec2 = m.dec2.make_grad();
  g.dec_out = m.dec_out.make_grad();
}

}  // namespace

VaeModel make_vae(const VaeConfig& cfg, std::uint64_t init_seed) {
  VaeModel m;
  m.window_size = cfg.window_size;
  m.latent_dim = cfg.latent_dim;
  m.enc1 = nn::DenseLayer(cfg.window_size, cfg.hidden, nn::Activation::Relu);
  m.enc2 = nn::DenseLayer(cfg.hidden, cfg.hidden, nn::Activation::Relu);
  m.mu_head = nn::DenseLayer(cfg.hidden, cfg.latent_dim, nn::Activation::Linear);
  m.logvar_head = nn::DenseLayer(cfg.hidden, cfg.latent_dim, nn::Activation::Linear);
  m.dec1 = nn::DenseLayer(cfg.latent_dim, cfg.hidden, nn::Activation::Relu);
  m.dec2 = nn::DenseLayer(cfg.hidden, cfg.hidden, nn::Activation::Relu);
  m.dec_out = nn::DenseLayer(cfg.hidden, cfg.window_size, nn::Activation::Sigmoid);
  Rng rng(init_seed);
  for (auto* layer : {&m.enc1, &m.enc2, &m.mu_head, &m.logvar_head, &m.dec1, &m.dec2, &m.dec_out}) {
    layer->init(rng);
  }
  return m;
}

std::vector<double> VaeModel::decode(std::span<const double> z) const {
  auto h = dec1.forward(z);
  h = dec2.forward(h);
  return dec_out.forward(h);
}

std::pair<std::vector<double>, std::vector<double>> VaeModel::encode(
    std::span<const double> x) const {
  auto h = enc1.forward(x);
  h = enc2.forward(h);
  return {mu_head.forward(h), logvar_head.forward(h)};
}

std::pair<VaeModel, TrainingReport> vae_train(const std::vector<std::vector<double>>& windows,
                                              const VaeConfig& cfg) {
  if (cfg.epochs < 1) throw TrainingError("vae_train: epoch budget must be at least 1");
  validate_windows(windows, cfg.window_size, cfg.min_windows);

  const SeedSequence seeds(cfg.seed);
  VaeModel model = make_vae(cfg, seeds.derive("vae-init"));
  TrainingReport report;

  // Seeded shuffle, then split off the held-out calibration tail.
  std::vector<std::size_t> order(windows.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(seeds.derive("vae-split"));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[shuffle_rng.integer(i)]);
  }
  std::size_t holdout =
      static_cast<std::size_t>(cfg.holdout_fraction * static_cast<double>(windows.size()));
  holdout = std::clamp<std::size_t>(holdout, 1, windows.size() - 1);
  std::vector<std::size_t> train_idx(order.begin(), order.end() - holdout);
  std::vector<std::vector<double>> held_out;
  for (auto it = order.end() - static_cast<std::ptrdiff_t>(holdout); it != order.end(); ++it) {
    held_out.push_back(windows[*it]);
  }

  nn::AdamOptimizer adam(cfg.learning_rate);
  Rng train_rng(seeds.derive("vae-train"));
  VaeGrads grads;

  double best_loss = std::numeric_limits<double>::infinity();
  int plateau = 0;

  nn::DenseCache c_enc1, c_enc2, c_mu, c_lv, c_dec1, c_dec2, c_out;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Per-epoch shuffle of the training windows.
    for (std::size_t i = train_idx.size(); i > 1; --i) {
      std::swap(train_idx[i - 1], train_idx[train_rng.integer(i)]);
    }

    double epoch_recon = 0.0;
    double epoch_kl = 0.0;
    std::size_t batch_start = 0;
    while (batch_start < train_idx.size()) {
      const std::size_t batch_end =
          std::min(batch_start + static_cast<std::size_t>(cfg.batch_size), train_idx.size());
      const double inv_batch = 1.0 / static_cast<double>(batch_end - batch_start);
      zero_grads(model, grads);

      for (std::size_t b = batch_start; b < batch_end; ++b) {
        const auto& x = windows[train_idx[b]];

        auto h1 = model.enc1.forward(x, &c_enc1);
        auto h2 = model.enc2.forward(h1, &c_enc2);
        auto mu = model.mu_head.forward(h2, &c_mu);
        auto logvar = model.logvar_head.forward(h2, &c_lv);

        std::vector<double> eps(mu.size()), z(mu.size());
        for (std::size_t k = 0; k < z.size(); ++k) {
          eps[k] = train_rng.gaussian();
          z[k] = mu[k] + std::exp(0.5 * logvar[k]) * eps[k];
        }

        auto d1 = model.dec1.forward(z, &c_dec1);
        auto d2 = model.dec2.forward(d1, &c_dec2);
        auto xhat = model.dec_out.forward(d2, &c_out);

        epoch_recon += nn::loss_mse(xhat, x);
        epoch_kl += nn::loss_gaussian_kl(mu, logvar);

        // d(recon_weight * sum (xhat - x)^2) / dxhat
        std::vector<double> dxhat(xhat.size());
        for (std::size_t k = 0; k < xhat.size(); ++k) {
          dxhat[k] = inv_batch * cfg.recon_weight * 2.0 * (xhat[k] - x[k]);
        }
        auto dd2 = model.dec_out.backward(c_out, dxhat, grads.dec_out);
        auto dd1 = model.dec2.backward(c_dec2, dd2, grads.dec2);
        auto dz = model.dec1.backward(c_dec1, dd1, grads.dec1);

        // Reparameterization plus the KL terms.
        std::vector<double> dmu(mu.size()), dlogvar(mu.size());
        for (std::size_t k = 0; k < mu.size(); ++k) {
          dmu[k] = dz[k] + inv_batch * mu[k];
          dlogvar[k] = dz[k] * eps[k] * 0.5 * std::exp(0.5 * logvar[k]) +
                       inv_batch * 0.5 * (std::exp(logvar[k]) - 1.0);
        }

        auto dh2_mu = model.mu_head.backward(c_mu, dmu, grads.mu_head);
        auto dh2_lv = model.logvar_head.backward(c_lv, dlogvar, grads.logvar_head);
        std::vector<double> dh2(dh2_mu.size());
        for (std::size_t k = 0; k < dh2.size(); ++k) dh2[k] = dh2_mu[k] + dh2_lv[k];
        auto dh1 = model.enc2.backward(c_enc2, dh2, grads.enc2);
        model.enc1.backward(c_enc1, dh1, grads.enc1);
      }

      adam.step(model_params(model), grad_params(model, grads));
      batch_start = batch_end;
    }

    const double n_train = static_cast<double>(train_idx.size());
    report.loss_primary.push_back(epoch_recon / n_train);
    report.loss_secondary.push_back(epoch_kl / n_train);
    ++report.epochs_run;

    const double total = cfg.recon_weight * epoch_recon / n_train + epoch_kl / n_train;
    if (total < best_loss - cfg.early_stop_tol * (1.0 + std::abs(best_loss))) {
      best_loss = total;
      plateau = 0;
    } else if (++plateau >= cfg.early_stop_epochs && epoch + 1 >= cfg.early_stop_min_epochs) {
      break;
    }
  }

  model.trained = true;

  CalibrationConfig calib = cfg.calibration;
  calib.seed = seeds.derive("vae-calib");
  const auto calibration = calibrate_thresholds(
      held_out, [&model](std::uint64_t s) { return vae_generate(model, s); }, nullptr, calib);
  model.p_kstest = calibration.p_kstest;
  report.p_kstest = calibration.p_kstest;
  report.calibration_samples = calibration.samples_used;
  return {std::move(model), std::move(report)};
}

std::vector<double> vae_generate(const VaeModel& model, std::uint64_t seed) {
  if (!model.trained) throw StateError("vae_generate: model is not trained");
  Rng rng(seed);
  std::vector<double> z(model.latent_dim);
  for (auto& v : z) v = rng.gaussian();
  return model.decode(z);
}

}  // namespace retrainer::genai
