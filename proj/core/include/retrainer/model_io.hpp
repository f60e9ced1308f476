#pragma once

#include <string>

#include "retrainer/forecast/forecaster.hpp"
#include "retrainer/genai/gan.hpp"
#include "retrainer/genai/vae.hpp"

namespace retrainer {

// Model snapshots in the shared container format. Attributes carry the
// calibrated thresholds and normalization bounds next to the weights, so a
// reloaded model is immediately servable.

void save_vae(const genai::VaeModel& model, const std::string& path);
genai::VaeModel load_vae(const std::string& path);

void save_gan(const genai::GanModel& model, const std::string& path);
genai::GanModel load_gan(const std::string& path);

void save_forecaster(const forecast::Forecaster& model, const std::string& path);
forecast::Forecaster load_forecaster(const std::string& path);

}  // namespace retrainer
