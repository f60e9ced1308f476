#include "retrainer/genai/gan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
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
    throw TrainingError("gan_train: need at least " + std::to_string(min_windows) +
                        " windows, got " + std::to_string(windows.size()));
  }
  for (const auto& w : windows) {
    if (static_cast<int>(w.size()) != ws) {
      throw TrainingError("gan_train: window length " + std::to_string(w.size()) +
                          " does not match configured window size " + std::to_string(ws));
    }
    for (double v : w) {
      if (v < 0.0 || v > 1.0 || !std::isfinite(v)) {
        throw DomainError("gan_train: input values must be normalized to [0,1]");
      }
    }
  }
}

struct GenCaches {
  std::vector<nn::LstmStepCache> lstm;
  std::vector<nn::DenseCache> fc1, fc2, fc3;
};

struct GenGrads {
  nn::LstmGrad lstm;
  nn::DenseGrad fc1, fc2, fc3;
};

struct DiscCaches {
  nn::DenseCache d1, d2, d3;
};

struct DiscGrads {
  nn::DenseGrad d1, d2, d3;
};

std::vector<double> gen_forward(const GanModel& m, std::span<const double> noise,
                                GenCaches* caches) {
  const int ws = m.window_size;
  std::vector<double> out(ws);
  auto state = m.gen_lstm.zero_state();
  if (caches) {
    caches->lstm.resize(ws);
    caches->fc1.resize(ws);
    caches->fc2.resize(ws);
    caches->fc3.resize(ws);
  }
  for (int t = 0; t < ws; ++t) {
    const double zt = noise[t];
    auto h = m.gen_lstm.step(std::span<const double>(&zt, 1), state,
                             caches ? &caches->lstm[t] : nullptr);
    auto a1 = m.gen_fc1.forward(h, caches ? &caches->fc1[t] : nullptr);
    auto a2 = m.gen_fc2.forward(a1, caches ? &caches->fc2[t] : nullptr);
    auto a3 = m.gen_fc3.forward(a2, caches ? &caches->fc3[t] : nullptr);
    out[t] = a3[0];
  }
  return out;
}

void gen_backward(const GanModel& m, const GenCaches& caches, std::span<const double> dout,
                  GenGrads& grads) {
  const int ws = m.window_size;
  nn::Vector dh_next(m.gen_lstm.hidden_size, 0.0);
  nn::Vector dc(m.gen_lstm.hidden_size, 0.0);
  for (int t = ws - 1; t >= 0; --t) {
    nn::Vector d3{dout[t]};
    auto da2 = m.gen_fc3.backward(caches.fc3[t], d3, grads.fc3);
    auto da1 = m.gen_fc2.backward(caches.fc2[t], da2, grads.fc2);
    auto dh = m.gen_fc1.backward(caches.fc1[t], da1, grads.fc1);
    for (std::size_t k = 0; k < dh.size(); ++k) dh[k] += dh_next[k];
    m.gen_lstm.backward_step(caches.lstm[t], dh, dc, dh_next, grads.lstm);
  }
}

std::vector<double> disc_forward(const GanModel& m, std::span<const double> window,
                                 DiscCaches* caches) {
  auto h1 = m.disc1.forward(window, caches ? &caches->d1 : nullptr);
  auto h2 = m.disc2.forward(h1, caches ? &caches->d2 : nullptr);
  return m.disc3.forward(h2, caches ? &caches->d3 : nullptr);
}

nn::Vector disc_backward(const GanModel& m, const DiscCaches& caches,
                         std::span<const double> dscores, DiscGrads& grads) {
  auto dh2 = m.disc3.backward(caches.d3, dscores, grads.d3);
  auto dh1 = m.disc2.backward(caches.d2, dh2, grads.d2);
  return m.disc1.backward(caches.d1, dh1, grads.d1);
}

nn::ParamRefs gen_params(GanModel& m) {
  nn::ParamRefs refs = m.gen_lstm.params();
  for (auto* layer : {&m.gen_fc1, &m.gen_fc2, &m.gen_fc3}) {
    auto p = layer->params();
    refs.insert(refs.end(), p.begin(), p.end());
  }
  return refs;
}

nn::ParamRefs gen_grad_refs(GanModel& m, GenGrads& g) {
  nn::ParamRefs refs = m.gen_lstm.grad_refs(g.lstm);
  auto add = [&refs](nn::ParamRefs r) { refs.insert(refs.end(), r.begin(), r.end()); };
  add(m.gen_fc1.grad_refs(g.fc1));
  add(m.gen_fc2.grad_refs(g.fc2));
  add(m.gen_fc3.grad_refs(g.fc3));
  return refs;
}

nn::ParamRefs disc_params(GanModel& m) {
  nn::ParamRefs refs;
  for (auto* layer : {&m.disc1, &m.disc2, &m.disc3}) {
    auto p = layer->params();
    refs.insert(refs.end(), p.begin(), p.end());
  }
  return refs;
}

nn::ParamRefs disc_grad_refs(GanModel& m, DiscGrads& g) {
  nn::ParamRefs refs;
  auto add = [&refs](nn::ParamRefs r) { refs.insert(refs.end(), r.begin(), r.end()); };
  add(m.disc1.grad_refs(g.d1));
  add(m.disc2.grad_refs(g.d2));
  add(m.disc3.grad_refs(g.d3));
  return refs;
}

void zero_gen_grads(GanModel& m, GenGrads& g) {
  g.lstm = m.gen_lstm.make_grad();
  g.fc1 = m.gen_fc1.make_grad();
  g.fc2 = m.gen_fc2.make_grad();
  g.fc3 = m.gen_fc3.make_grad();
}

void zero_disc_grads(GanModel& m, DiscGrads& g) {
  g.d1 = m.disc1.make_grad();
  g.d2 = m.disc2.make_grad();
  g.d3 = m.disc3.make_grad();
}

}  // namespace

GanModel make_gan(const GanConfig& cfg, std::uint64_t init_seed) {
  GanModel m;
  m.window_size = cfg.window_size;
  m.gen_lstm = nn::LstmCell(1, cfg.gen_hidden, nn::Activation::Tanh);
  m.gen_fc1 = nn::DenseLayer(cfg.gen_hidden, cfg.gen_hidden, nn::Activation::Relu);
  m.gen_fc2 = nn::DenseLayer(cfg.gen_hidden, cfg.gen_hidden / 2, nn::Activation::Relu);
  m.gen_fc3 = nn::DenseLayer(cfg.gen_hidden / 2, 1, nn::Activation::Sigmoid);
  m.disc1 = nn::DenseLayer(cfg.window_size, cfg.disc_hidden, nn::Activation::Relu);
  m.disc2 = nn::DenseLayer(cfg.disc_hidden, cfg.disc_hidden / 2, nn::Activation::Relu);
  m.disc3 = nn::DenseLayer(cfg.disc_hidden / 2, cfg.window_size, nn::Activation::Sigmoid);
  Rng rng(init_seed);
  m.gen_lstm.init(rng);
  for (auto* layer : {&m.gen_fc1, &m.gen_fc2, &m.gen_fc3, &m.disc1, &m.disc2, &m.disc3}) {
    layer->init(rng);
  }
  return m;
}

std::vector<double> GanModel::generate_from(std::span<const double> noise) const {
  if (static_cast<int>(noise.size()) != window_size) {
    throw ShapeError("gan generate: noise length must equal the window size");
  }
  return gen_forward(*this, noise, nullptr);
}

std::pair<GanModel, TrainingReport> gan_train(const std::vector<std::vector<double>>& windows,
                                              const GanConfig& cfg) {
  if (cfg.epochs < 1) throw TrainingError("gan_train: epoch budget must be at least 1");
  validate_windows(windows, cfg.window_size, cfg.min_windows);

  const SeedSequence seeds(cfg.seed);
  GanModel model = make_gan(cfg, seeds.derive("gan-init"));
  TrainingReport report;

  std::vector<std::size_t> order(windows.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(seeds.derive("gan-split"));
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

  nn::AdamOptimizer adam_g(cfg.learning_rate);
  nn::AdamOptimizer adam_d(cfg.learning_rate);
  Rng train_rng(seeds.derive("gan-train"));

  const int ws = cfg.window_size;
  const std::vector<double> ones(ws, 1.0);
  const std::vector<double> real_target(ws, cfg.real_label);
  const std::vector<double> zeros(ws, 0.0);

  GenGrads g_grads;
  DiscGrads d_grads;
  DiscGrads d_scratch;  // G step runs D backward without keeping its grads
  GenCaches g_caches;
  DiscCaches d_caches;

  int converge_streak = 0;
  int collapse_streak = 0;
  bool collapse_warned = false;
  const double ln2 = std::numbers::ln2;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = train_idx.size(); i > 1; --i) {
      std::swap(train_idx[i - 1], train_idx[train_rng.integer(i)]);
    }

    double epoch_d_loss = 0.0;
    double epoch_g_loss = 0.0;
    double sum_real = 0.0, sum_fake = 0.0, sum_sq = 0.0;
    std::size_t n_scores = 0;
    std::size_t d_batches = 0;

    // Instance noise anneals to zero by mid-training.
    const double anneal = 1.0 - std::min(1.0, 2.0 * static_cast<double>(epoch) /
                                                  std::max(1, cfg.epochs));
    const double inst_noise = cfg.instance_noise * anneal;
    auto blur = [&](std::vector<double> w) {
      if (inst_noise > 0.0) {
        for (auto& v : w) v = std::clamp(v + train_rng.gaussian(0.0, inst_noise), 0.0, 1.0);
      }
      return w;
    };

    std::size_t batch_start = 0;
    while (batch_start < train_idx.size()) {
      const std::size_t batch_end =
          std::min(batch_start + static_cast<std::size_t>(cfg.batch_size), train_idx.size());
      const std::size_t bsz = batch_end - batch_start;

      // Discriminator step: real windows toward the smoothed label, generated
      // toward 0.
      zero_disc_grads(model, d_grads);
      const double inv_d = 1.0 / static_cast<double>(2 * bsz);
      double d_loss = 0.0;
      for (std::size_t b = batch_start; b < batch_end; ++b) {
        auto scores = disc_forward(model, blur(windows[train_idx[b]]), &d_caches);
        d_loss += nn::loss_bce(scores, real_target);
        auto ds = nn::loss_bce_grad(scores, real_target);
        for (auto& v : ds) v *= 2.0 * inv_d;
        disc_backward(model, d_caches, ds, d_grads);
        for (double s : scores) {
          sum_real += s;
          sum_sq += s * s;
        }
        n_scores += scores.size();

        std::vector<double> noise(ws);
        for (auto& z : noise) z = train_rng.gaussian();
        scores = disc_forward(model, blur(gen_forward(model, noise, nullptr)), &d_caches);
        d_loss += nn::loss_bce(scores, zeros);
        ds = nn::loss_bce_grad(scores, zeros);
        for (auto& v : ds) v *= 2.0 * inv_d;
        disc_backward(model, d_caches, ds, d_grads);
        for (double s : scores) {
          sum_fake += s;
          sum_sq += s * s;
        }
        n_scores += scores.size();
      }
      adam_d.step(disc_params(model), disc_grad_refs(model, d_grads));
      epoch_d_loss += d_loss / static_cast<double>(2 * bsz);
      ++d_batches;

      // Generator steps: push D(G(z)) toward 1.
      double g_loss = 0.0;
      for (int gs = 0; gs < std::max(1, cfg.gen_steps_per_disc); ++gs) {
        zero_gen_grads(model, g_grads);
        zero_disc_grads(model, d_scratch);
        const double inv_g = 1.0 / static_cast<double>(bsz);
        g_loss = 0.0;
        for (std::size_t b = 0; b < bsz; ++b) {
          std::vector<double> noise(ws);
          for (auto& z : noise) z = train_rng.gaussian();
          const auto fake = gen_forward(model, noise, &g_caches);
          auto scores = disc_forward(model, fake, &d_caches);
          g_loss += nn::loss_bce(scores, ones);
          auto ds = nn::loss_bce_grad(scores, ones);
          for (auto& v : ds) v *= inv_g;
          auto dfake = disc_backward(model, d_caches, ds, d_scratch);
          gen_backward(model, g_caches, dfake, g_grads);
        }
        adam_g.step(gen_params(model), gen_grad_refs(model, g_grads));
      }
      epoch_g_loss += g_loss / static_cast<double>(bsz);

      batch_start = batch_end;
    }

    const double d_loss = epoch_d_loss / static_cast<double>(d_batches);
    const double g_loss = epoch_g_loss / static_cast<double>(d_batches);
    report.loss_primary.push_back(g_loss);
    report.loss_secondary.push_back(d_loss);
    ++report.epochs_run;

    // Collapse tracking: near-constant scores on both classes.
    const double mean_real = sum_real / static_cast<double>(n_scores / 2);
    const double mean_fake = sum_fake / static_cast<double>(n_scores / 2);
    const double mean_all = (sum_real + sum_fake) / static_cast<double>(n_scores);
    const double var_all = std::max(0.0, sum_sq / static_cast<double>(n_scores) - mean_all * mean_all);
    if (std::abs(mean_real - mean_fake) < cfg.collapse_tol &&
        std::sqrt(var_all) < cfg.collapse_tol) {
      if (++collapse_streak >= cfg.collapse_epochs && !collapse_warned) {
        report.warnings.push_back("discriminator scores near-constant on both classes for " +
                                  std::to_string(collapse_streak) + " consecutive epochs");
        collapse_warned = true;
      }
    } else {
      collapse_streak = 0;
    }

    // Loss-convergence criterion: both players parked at the equilibrium.
    if (std::abs(d_loss - ln2) < cfg.converge_tol && std::abs(g_loss - ln2) < cfg.converge_tol) {
      if (++converge_streak >= cfg.converge_epochs && epoch + 1 >= cfg.converge_min_epochs) break;
    } else {
      converge_streak = 0;
    }
  }

  model.trained = true;

  CalibrationConfig calib = cfg.calibration;
  calib.seed = seeds.derive("gan-calib");
  const auto calibration = calibrate_thresholds(
      held_out, [&model](std::uint64_t s) { return gan_generate(model, s); },
      [&model](std::span<const double> w) { return discriminator_scores(model, w); }, calib);
  model.p_kstest = calibration.p_kstest;
  model.d_score = *calibration.d_score;
  report.p_kstest = calibration.p_kstest;
  report.d_score = calibration.d_score;
  report.calibration_samples = calibration.samples_used;
  return {std::move(model), std::move(report)};
}

std::vector<double> gan_generate(const GanModel& model, std::uint64_t seed) {
  if (!model.trained) throw StateError("gan_generate: model is not trained");
  Rng rng(seed);
  std::vector<double> noise(model.window_size);
  for (auto& z : noise) z = rng.gaussian();
  return gen_forward(model, noise, nullptr);
}

std::vector<double> discriminator_scores(const GanModel& model, std::span<const double> window) {
  if (static_cast<int>(window.size()) != model.window_size) {
    throw ShapeError("discriminator_scores: window length " + std::to_string(window.size()) +
                     " does not match model window size " + std::to_string(model.window_size));
  }
  return disc_forward(model, window, nullptr);
}

}  // namespace retrainer::genai
