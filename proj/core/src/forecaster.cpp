#include "retrainer/forecast/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "retrainer/errors.hpp"
#include "retrainer/nn/adam.hpp"
#include "retrainer/nn/loss.hpp"
#include "retrainer/rng.hpp"

namespace retrainer::forecast {

namespace {

struct StackGrads {
  std::vector<nn::LstmGrad> cells;
  nn::DenseGrad head;
};

nn::ParamRefs model_params(Forecaster& m) {
  nn::ParamRefs refs;
  for (auto& c : m.cells) {
    auto p = c.params();
    refs.insert(refs.end(), p.begin(), p.end());
  }
  auto h = m.head.params();
  refs.insert(refs.end(), h.begin(), h.end());
  return refs;
}

nn::ParamRefs grad_refs(Forecaster& m, StackGrads& g) {
  nn::ParamRefs refs;
  for (std::size_t l = 0; l < m.cells.size(); ++l) {
    auto p = m.cells[l].grad_refs(g.cells[l]);
    refs.insert(refs.end(), p.begin(), p.end());
  }
  auto h = m.head.grad_refs(g.head);
  refs.insert(refs.end(), h.begin(), h.end());
  return refs;
}

void zero_grads(Forecaster& m, StackGrads& g) {
  g.cells.resize(m.cells.size());
  for (std::size_t l = 0; l < m.cells.size(); ++l) g.cells[l] = m.cells[l].make_grad();
  g.head = m.head.make_grad();
}

// Forward over the lookback window; caches per layer and step when training.
double stack_forward(const Forecaster& m, std::span<const double> normalized,
                     std::vector<std::vector<nn::LstmStepCache>>* caches,
                     nn::DenseCache* head_cache) {
  const int steps = static_cast<int>(normalized.size());
  std::vector<nn::LstmState> states;
  states.reserve(m.cells.size());
  for (const auto& c : m.cells) states.push_back(c.zero_state());
  if (caches) {
    caches->assign(m.cells.size(), std::vector<nn::LstmStepCache>(steps));
  }

  nn::Vector h;
  for (int t = 0; t < steps; ++t) {
    const double x = normalized[t];
    h = m.cells[0].step(std::span<const double>(&x, 1), states[0],
                        caches ? &(*caches)[0][t] : nullptr);
    for (std::size_t l = 1; l < m.cells.size(); ++l) {
      h = m.cells[l].step(h, states[l], caches ? &(*caches)[l][t] : nullptr);
    }
  }
  const auto out = m.head.forward(h, head_cache);
  return out[0];
}

// Backward through the whole stack for a single scalar output gradient.
void stack_backward(const Forecaster& m, const std::vector<std::vector<nn::LstmStepCache>>& caches,
                    const nn::DenseCache& head_cache, double dout, StackGrads& grads) {
  const int steps = static_cast<int>(caches[0].size());
  const std::size_t layers = m.cells.size();

  nn::Vector dpred{dout};
  auto dh_top = m.head.backward(head_cache, dpred, grads.head);

  // dh/dc running backward per layer; dh_carry[l] is the gradient arriving at
  // layer l's hidden output for the step under processing.
  std::vector<nn::Vector> dh_next(layers), dc(layers), dh_carry(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    dh_next[l].assign(m.cells[l].hidden_size, 0.0);
    dc[l].assign(m.cells[l].hidden_size, 0.0);
  }

  for (int t = steps - 1; t >= 0; --t) {
    for (std::size_t li = layers; li-- > 0;) {
      nn::Vector dh = dh_next[li];
      if (t == steps - 1 && li == layers - 1) {
        for (std::size_t k = 0; k < dh.size(); ++k) dh[k] += dh_top[k];
      }
      if (li + 1 < layers) {
        for (std::size_t k = 0; k < dh.size(); ++k) dh[k] += dh_carry[li + 1][k];
      }
      auto dx = m.cells[li].backward_step(caches[li][t], dh, dc[li], dh_next[li], grads.cells[li]);
      dh_carry[li] = std::move(dx);
    }
  }
}

std::vector<double> normalize_clamped(std::span<const double> raw, const stream::Bounds& b) {
  return stream::normalize(raw, b);
}

stream::Bounds robust_bounds(std::span<const double> data) {
  auto b = stream::bounds_of(data);
  if (!(b.max > b.min)) {
    // Constant history: widen so normalization stays well defined and the
    // constant maps to mid-range.
    const double pad = std::max(0.5, std::abs(b.min) * 0.05);
    b.min -= pad;
    b.max += pad;
  }
  return b;
}

void train_on(Forecaster& model, std::span<const double> raw, const ForecasterConfig& cfg,
              int epochs, nn::AdamOptimizer& adam, Rng& rng, ForecastTrainingReport* report) {
  const int L = model.lookback;
  const auto normalized = normalize_clamped(raw, model.bounds);
  const std::size_t n_pairs = normalized.size() - static_cast<std::size_t>(L);

  StackGrads grads;
  std::vector<std::vector<nn::LstmStepCache>> caches;
  nn::DenseCache head_cache;

  for (int epoch = 0; epoch < epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::size_t epoch_count = 0;
    const int batches = std::max(1, cfg.batches_per_epoch);
    for (int batch = 0; batch < batches; ++batch) {
      zero_grads(model, grads);
      const std::size_t bsz = std::min<std::size_t>(cfg.batch_size, n_pairs);
      const double inv = 1.0 / static_cast<double>(bsz);
      for (std::size_t b = 0; b < bsz; ++b) {
        const std::size_t start = rng.integer(n_pairs);
        std::span<const double> window(normalized.data() + start, static_cast<std::size_t>(L));
        const double target = normalized[start + static_cast<std::size_t>(L)];
        const double pred = stack_forward(model, window, &caches, &head_cache);
        const double err = pred - target;
        epoch_loss += err * err;
        ++epoch_count;
        stack_backward(model, caches, head_cache, inv * 2.0 * err, grads);
      }
      adam.step(model_params(model), grad_refs(model, grads));
    }
    if (report) report->epoch_loss.push_back(epoch_loss / static_cast<double>(epoch_count));
  }
}

}  // namespace

Forecaster train_forecaster(std::span<const double> history, const ForecasterConfig& cfg,
                            ForecastTrainingReport* report) {
  if (history.size() < static_cast<std::size_t>(cfg.lookback) + 1) {
    throw TrainingError("train_forecaster: need at least lookback+1 = " +
                        std::to_string(cfg.lookback + 1) + " samples, got " +
                        std::to_string(history.size()));
  }

  const SeedSequence seeds(cfg.seed);
  Forecaster model;
  model.lookback = cfg.lookback;
  model.bounds = robust_bounds(history);

  Rng init_rng(seeds.derive("forecaster-init"));
  model.cells.emplace_back(1, cfg.hidden, cfg.cell_activation);
  for (int l = 1; l < cfg.num_layers; ++l) {
    model.cells.emplace_back(cfg.hidden, cfg.hidden, cfg.cell_activation);
  }
  for (auto& c : model.cells) c.init(init_rng);
  model.head = nn::DenseLayer(cfg.hidden, 1, nn::Activation::Linear);
  model.head.init(init_rng);

  nn::AdamOptimizer adam(cfg.learning_rate);
  Rng rng(seeds.derive("forecaster-train"));
  train_on(model, history, cfg, cfg.epochs, adam, rng, report);

  model.trained = true;
  model.version = 1;
  return model;
}

double predict(const Forecaster& model, std::span<const double> recent) {
  if (!model.trained) throw StateError("predict: forecaster is not trained");
  if (recent.size() != static_cast<std::size_t>(model.lookback)) {
    throw ShapeError("predict: expected exactly " + std::to_string(model.lookback) +
                     " samples, got " + std::to_string(recent.size()));
  }
  const auto normalized = normalize_clamped(recent, model.bounds);
  double out = stack_forward(model, normalized, nullptr, nullptr);
  out = std::clamp(out, 0.0, 1.0);
  return stream::denormalize(out, model.bounds);
}

RetrainJob retrain(const Forecaster& model, std::span<const double> new_data,
                   const ForecasterConfig& cfg, std::uint64_t trigger_tick) {
  if (!model.trained) throw StateError("retrain: forecaster is not trained");
  if (new_data.empty()) throw TrainingError("retrain: no data collected for the job");

  // Most recent samples win when over the cap.
  std::span<const double> data = new_data;
  if (data.size() > cfg.max_retrain_samples) {
    data = data.subspan(data.size() - cfg.max_retrain_samples);
  }
  if (data.size() < static_cast<std::size_t>(cfg.lookback) + 1) {
    throw TrainingError("retrain: need at least lookback+1 samples, got " +
                        std::to_string(data.size()));
  }

  RetrainJob job;
  job.trigger_tick = trigger_tick;
  job.start_tick = trigger_tick;
  job.samples_used = data.size();
  job.completion_tick =
      trigger_tick + static_cast<std::uint64_t>(std::ceil(
                         cfg.retrain_base_ticks +
                         cfg.retrain_per_sample_ticks * static_cast<double>(data.size())));

  // Warm start: weights are carried over, bounds refreshed from the new data.
  job.model = model;
  job.model.bounds = robust_bounds(data);

  const SeedSequence seeds(cfg.seed);
  nn::AdamOptimizer adam(cfg.learning_rate);
  Rng rng(seeds.derive("forecaster-retrain", trigger_tick));
  train_on(job.model, data, cfg, cfg.retrain_epochs, adam, rng, nullptr);
  job.complete = true;
  return job;
}

Forecaster replace(const Forecaster& active, const RetrainJob& job) {
  if (!job.complete || !job.model.trained) {
    throw StateError("replace: retrain job is not complete");
  }
  Forecaster next = job.model;
  next.version = active.version + 1;
  return next;
}

}  // namespace retrainer::forecast
