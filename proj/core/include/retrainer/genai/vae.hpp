#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "retrainer/genai/calibrate.hpp"
#include "retrainer/genai/report.hpp"
#include "retrainer/nn/dense.hpp"
#include "retrainer/stream/normalize.hpp"

namespace retrainer::genai {

struct VaeConfig {
  int window_size = 10;
  int latent_dim = 32;
  int hidden = 64;
  int epochs = 200;
  int batch_size = 16;
  double learning_rate = 0.001;
  // Weight on the summed squared reconstruction error against the KL term;
  // equivalent to a fixed decoder output variance of 1/(2w).
  double recon_weight = 200.0;
  std::size_t min_windows = 50;
  double holdout_fraction = 0.25;
  int early_stop_epochs = 20;
  int early_stop_min_epochs = 120;  // plateau checking starts here
  double early_stop_tol = 1e-5;
  CalibrationConfig calibration;
  std::uint64_t seed = 1;
};

// Windowed-traffic VAE: MLP encoder to a 32-dim Gaussian latent, MLP decoder
// with sigmoid output, trained on the usual reconstruction-plus-KL objective
// and calibrated with a KS-p-value trigger threshold.
struct VaeModel {
  nn::DenseLayer enc1, enc2, mu_head, logvar_head;
  nn::DenseLayer dec1, dec2, dec_out;
  int window_size = 10;
  int latent_dim = 32;
  double p_kstest = 0.0;
  stream::Bounds bounds{0.0, 1.0};
  bool trained = false;

  // Decoder pass only; defined for untrained models too.
  std::vector<double> decode(std::span<const double> z) const;
  // Encoder pass: returns (mu, logvar).
  std::pair<std::vector<double>, std::vector<double>> encode(std::span<const double> x) const;
};

VaeModel make_vae(const VaeConfig& cfg, std::uint64_t init_seed);

// Trains on normalized windows (each of length window_size, values in [0,1])
// and calibrates p_kstest on a held-out split. Throws TrainingError when the
// window count or epoch budget is too small, DomainError for non-normalized
// input.
std::pair<VaeModel, TrainingReport> vae_train(const std::vector<std::vector<double>>& windows,
                                              const VaeConfig& cfg);

// Draws z ~ N(0, I) and decodes one window. Throws StateError for untrained
// models.
std::vector<double> vae_generate(const VaeModel& model, std::uint64_t seed);

}  // namespace retrainer::genai
