#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "retrainer/detect/detector.hpp"
#include "retrainer/forecast/forecaster.hpp"
#include "retrainer/genai/gan.hpp"
#include "retrainer/genai/vae.hpp"
#include "retrainer/stream/csv.hpp"
#include "retrainer/stream/scenario.hpp"

namespace retrainer {

struct Thresholds {
  std::optional<double> p_vae_kstest;
  std::optional<double> p_gan_kstest;
  double rmse_threshold = 15.0;
  double t_ds_ms = 20.0;
  double t_e2e_ms = 5.0;
};

// Post-replacement refresh of the generative models and the LOF reference.
struct RefitConfig {
  std::size_t window_count = 200;  // most recent windows fed to the refit
  std::size_t min_windows = 8;
  int vae_epochs = 60;
  int gan_epochs = 80;
  std::size_t min_calibration_windows = 4;
};

struct Config {
  int window_size = 10;
  double tick_period_ms = 1.0;
  Thresholds thresholds;
  genai::VaeConfig vae;
  genai::GanConfig gan;
  forecast::ForecasterConfig forecaster;
  RefitConfig refit;

  std::string scenario_id = "qos";
  stream::ScenarioSpec scenario;       // evaluation stream
  stream::ScenarioSpec training;       // stream the initial models learn from
  std::optional<std::string> csv_path; // replaces the evaluation stream when set
  stream::DatasetSchema csv_schema;
  std::string csv_slice;

  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int parallel = 1;

  // Builds the detector configuration with thresholds applied for the given
  // detector kind.
  detect::DetectorConfig detector_config(detect::DetectorKind kind) const;
};

// Built-in presets: "qos", "ns-slow-close", "stationary".
Config preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Loads a JSON config file; unknown keys are rejected so typos fail loudly.
// The optional base gives presets referenced via {"preset": ...}.
Config load_config_file(const std::string& path);

// Applies RETRAINER_* environment overrides (RETRAINER_SEED, RETRAINER_OUT,
// RETRAINER_SCENARIO, RETRAINER_DETECTOR has no meaning here and is CLI-side,
// RETRAINER_TRIALS likewise). Returns the list of applied overrides.
std::vector<std::string> apply_env_overrides(Config& cfg);

// Full echo for report reproducibility.
nlohmann::json config_to_json(const Config& cfg);

}  // namespace retrainer
