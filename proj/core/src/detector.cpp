#include "retrainer/detect/detector.hpp"

#include <algorithm>
#include <cmath>

#include "retrainer/errors.hpp"
#include "retrainer/stats/ks.hpp"
#include "retrainer/stats/metrics.hpp"

namespace retrainer::detect {

std::string to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::Vae:
      return "vae";
    case DetectorKind::Gan:
      return "gan";
    case DetectorKind::Lof:
      return "lof";
    case DetectorKind::Threshold:
      return "threshold";
  }
  return "vae";
}

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::NoChange:
      return "no_change";
    case VerdictKind::Warning:
      return "warning";
    case VerdictKind::RetrainTrigger:
      return "retrain_trigger";
  }
  return "no_change";
}

DetectorKind detector_kind_from_string(const std::string& name) {
  if (name == "vae") return DetectorKind::Vae;
  if (name == "gan") return DetectorKind::Gan;
  if (name == "lof") return DetectorKind::Lof;
  if (name == "threshold") return DetectorKind::Threshold;
  throw ConfigError("unknown detector '" + name + "' (valid: vae, gan, lof, threshold)");
}

int consecutive_windows_required(const DetectorConfig& cfg) {
  if (cfg.consecutive_windows) {
    if (*cfg.consecutive_windows < 1) throw ConfigError("consecutive window count must be >= 1");
    return *cfg.consecutive_windows;
  }
  if (cfg.t_ds_ms <= 0.0 || cfg.t_e2e_ms <= 0.0) {
    throw ConfigError("LOF detector needs either a consecutive-window count or positive "
                      "T_ds / T_e2e delays");
  }
  return static_cast<int>(std::ceil(cfg.t_ds_ms / cfg.t_e2e_ms));
}

DetectorState make_detector(DetectorKind kind, const DetectorConfig& cfg, std::uint64_t seed) {
  DetectorState state;
  state.kind = kind;
  state.config = cfg;
  state.rng = Rng(seed);
  if (kind == DetectorKind::Lof) {
    consecutive_windows_required(cfg);  // fail fast on unusable config
  }
  return state;
}

namespace {

void check_window(const Window& window, int expected_ws, const char* who) {
  if (static_cast<int>(window.samples.size()) != expected_ws) {
    throw ConfigError(std::string(who) + ": window length " +
                      std::to_string(window.samples.size()) +
                      " does not match configured window size " + std::to_string(expected_ws));
  }
}

void bank_window(DetectorState& state, const Window& window) {
  if (state.retrain_buffer.size() >= state.config.buffer_capacity) {
    state.retrain_buffer.erase(state.retrain_buffer.begin());
  }
  state.retrain_buffer.push_back(window);
  if (!state.first_warning_tick) state.first_warning_tick = window.start_tick;
}

}  // namespace

Verdict vae_detector_step(DetectorState& state, const Window& window,
                          const genai::VaeModel& model) {
  check_window(window, model.window_size, "vae detector");
  if (!model.trained) throw StateError("vae detector: model is not trained");

  const auto generated = genai::vae_generate(model, state.rng.next_u64());
  const auto ks = stats::ks_two_sample(generated, window.samples);
  const double threshold = state.config.p_kstest_override.value_or(model.p_kstest);

  Verdict v;
  v.window_index = window.index;
  v.evidence.p_value = ks.p_value;
  if (ks.p_value < threshold) {
    v.kind = VerdictKind::RetrainTrigger;
    bank_window(state, window);
  } else {
    v.kind = VerdictKind::NoChange;
  }
  return v;
}

Verdict gan_detector_step(DetectorState& state, const Window& window,
                          const genai::GanModel& model) {
  check_window(window, model.window_size, "gan detector");
  if (!model.trained) throw StateError("gan detector: model is not trained");

  const auto scores = genai::discriminator_scores(model, window.samples);
  const auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
  bool warning = false;
  for (double s : scores) {
    if (s < model.d_score.low || s > model.d_score.high) {
      warning = true;
      break;
    }
  }
  if (warning) bank_window(state, window);

  const auto generated = genai::gan_generate(model, state.rng.next_u64());
  const auto ks = stats::ks_two_sample(generated, window.samples);
  const double threshold = state.config.p_kstest_override.value_or(model.p_kstest);
  const bool trigger = ks.p_value < threshold;
  if (trigger && !warning) bank_window(state, window);

  Verdict v;
  v.window_index = window.index;
  v.evidence.p_value = ks.p_value;
  v.evidence.score_min = *mn;
  v.evidence.score_max = *mx;
  v.evidence.warning_zone = warning;
  v.kind = trigger ? VerdictKind::RetrainTrigger
                   : (warning ? VerdictKind::Warning : VerdictKind::NoChange);
  return v;
}

Verdict lof_detector_step(DetectorState& state, const Window& window,
                          const stats::LofReference& reference) {
  check_window(window, state.config.window_size, "lof detector");
  const int required = consecutive_windows_required(state.config);

  int outliers = 0;
  for (double sample : window.samples) {
    if (reference.score(sample) > state.config.lof_factor_threshold) ++outliers;
  }
  const bool outlier_window =
      outliers >= static_cast<int>(std::ceil(state.config.lof_outlier_fraction *
                                             static_cast<double>(window.samples.size())));

  Verdict v;
  v.window_index = window.index;
  v.evidence.outlier_samples = outliers;
  if (outlier_window) {
    ++state.consecutive_outliers;
    bank_window(state, window);
    v.kind = state.consecutive_outliers >= required ? VerdictKind::RetrainTrigger
                                                    : VerdictKind::Warning;
  } else {
    state.consecutive_outliers = 0;
    v.kind = VerdictKind::NoChange;
  }
  v.evidence.consecutive_outlier_windows = state.consecutive_outliers;
  return v;
}

Verdict threshold_detector_step(DetectorState& state, const Window& window,
                                std::span<const double> predictions) {
  if (predictions.size() != window.samples.size()) {
    throw ShapeError("threshold detector: predictions are not aligned with the window");
  }
  const double err = stats::rmse(predictions, window.samples);

  Verdict v;
  v.window_index = window.index;
  v.evidence.rmse = err;
  if (err > state.config.rmse_threshold) {
    v.kind = VerdictKind::RetrainTrigger;
    bank_window(state, window);
  } else {
    v.kind = VerdictKind::NoChange;
  }
  return v;
}

void reset_after_retrain(DetectorState& state, const RefreshedHandles& handles) {
  state.consecutive_outliers = 0;
  state.retrain_buffer.clear();
  state.first_warning_tick.reset();
  if (handles.vae) state.vae = handles.vae;
  if (handles.gan) state.gan = handles.gan;
  if (handles.lof_reference) state.lof_reference = handles.lof_reference;
}

}  // namespace retrainer::detect
