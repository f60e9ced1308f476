#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "retrainer/genai/gan.hpp"
#include "retrainer/genai/vae.hpp"
#include "retrainer/rng.hpp"
#include "retrainer/stats/lof.hpp"

namespace retrainer::detect {

// One fixed-length chunk of consecutive KPI samples; the unit every detector
// consumes. Generative detectors receive normalized samples, the LOF and
// RMSE-threshold detectors raw KPI units.
struct Window {
  std::size_t index = 0;
  std::uint64_t start_tick = 0;
  std::vector<double> samples;
};

enum class VerdictKind { NoChange, Warning, RetrainTrigger };

struct Evidence {
  std::optional<double> p_value;
  std::optional<double> score_min;
  std::optional<double> score_max;
  bool warning_zone = false;
  std::optional<double> rmse;
  std::optional<int> outlier_samples;
  std::optional<int> consecutive_outlier_windows;
};

struct Verdict {
  VerdictKind kind = VerdictKind::NoChange;
  std::size_t window_index = 0;
  Evidence evidence;
};

enum class DetectorKind { Vae, Gan, Lof, Threshold };

std::string to_string(DetectorKind kind);
std::string to_string(VerdictKind kind);
DetectorKind detector_kind_from_string(const std::string& name);

struct DetectorConfig {
  int window_size = 10;
  // Explicit thresholds override the model's calibrated values.
  std::optional<double> p_kstest_override;
  double rmse_threshold = 15.0;
  // LOF consecutive-window requirement: N = ceil(T_ds / T_e2e) unless pinned.
  double t_ds_ms = 20.0;
  double t_e2e_ms = 5.0;
  std::optional<int> consecutive_windows;
  double lof_factor_threshold = 1.5;
  double lof_outlier_fraction = 0.5;
  int lof_k = stats::kLofDefaultK;
  std::size_t buffer_capacity = 64;
};

// Throws ConfigError when neither an explicit count nor usable delays are
// configured.
int consecutive_windows_required(const DetectorConfig& cfg);

struct DetectorState {
  DetectorKind kind = DetectorKind::Vae;
  DetectorConfig config;

  std::shared_ptr<const genai::VaeModel> vae;
  std::shared_ptr<const genai::GanModel> gan;
  std::shared_ptr<const stats::LofReference> lof_reference;

  int consecutive_outliers = 0;
  std::vector<Window> retrain_buffer;
  std::optional<std::uint64_t> first_warning_tick;
  Rng rng{1};
};

DetectorState make_detector(DetectorKind kind, const DetectorConfig& cfg, std::uint64_t seed);

// Alg.-1 style step: decode fresh latent noise, KS-compare against the
// window, trigger when the p-value undercuts the threshold.
Verdict vae_detector_step(DetectorState& state, const Window& window, const genai::VaeModel& model);

// Alg.-2 style step: per-sample discriminator scores outside the calibrated
// interval raise the warning zone and bank the window for retraining; the
// generator + KS test decides the trigger. A trigger supersedes the warning
// in the verdict kind, the warning flag stays visible in the evidence.
Verdict gan_detector_step(DetectorState& state, const Window& window, const genai::GanModel& model);

// Baseline: a window is an outlier when at least the configured fraction of
// its samples score above the LOF factor threshold against the reference
// population; N consecutive outlier windows trigger.
Verdict lof_detector_step(DetectorState& state, const Window& window,
                          const stats::LofReference& reference);

// Baseline: trigger when the forecaster's window RMSE strictly exceeds the
// configured threshold (raw KPI units).
Verdict threshold_detector_step(DetectorState& state, const Window& window,
                                std::span<const double> predictions);

struct RefreshedHandles {
  std::shared_ptr<const genai::VaeModel> vae;
  std::shared_ptr<const genai::GanModel> gan;
  std::shared_ptr<const stats::LofReference> lof_reference;
};

// Clears counters, drains the retrain buffer, and swaps in refreshed model
// handles (null handles keep the current ones).
void reset_after_retrain(DetectorState& state, const RefreshedHandles& handles = {});

}  // namespace retrainer::detect
