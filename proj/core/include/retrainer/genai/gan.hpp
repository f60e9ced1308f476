#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "retrainer/genai/calibrate.hpp"
#include "retrainer/genai/report.hpp"
#include "retrainer/nn/dense.hpp"
#include "retrainer/nn/lstm.hpp"
#include "retrainer/stream/normalize.hpp"

namespace retrainer::genai {

struct GanConfig {
  int window_size = 10;
  int gen_hidden = 16;   // LSTM units in the generator
  int disc_hidden = 16;  // first discriminator layer; second is half
  int epochs = 300;
  int batch_size = 16;
  // Generator updates per discriminator update; the min-max objective says
  // nothing about the alternation schedule.
  int gen_steps_per_disc = 1;
  double learning_rate = 0.001;
  // Training stabilizers. Real labels are smoothed one-sided, and both real
  // and generated windows reach the discriminator with a little Gaussian
  // noise that anneals to zero halfway through training, keeping the two
  // supports overlapping while the generator catches up.
  double real_label = 0.9;
  double instance_noise = 0.1;
  std::size_t min_windows = 50;
  double holdout_fraction = 0.25;
  // Both players parked at the ln 2 equilibrium for this many consecutive
  // epochs ends training early; not before min_epochs, since a fresh
  // discriminator also scores everything near one half.
  int converge_epochs = 20;
  double converge_tol = 0.02;
  int converge_min_epochs = 150;
  // Near-constant scores on both classes for this many consecutive epochs is
  // recorded as a collapse warning.
  int collapse_epochs = 20;
  double collapse_tol = 0.02;
  CalibrationConfig calibration;
  std::uint64_t seed = 1;
};

// Adversarial pair over KPI windows. The generator walks Gaussian noise of
// length WS through one recurrent layer and a three-layer head, emitting one
// sigmoid sample per step; the discriminator is a three-layer MLP that reads
// the whole window and scores every sample in it.
struct GanModel {
  nn::LstmCell gen_lstm;                      // 1 -> gen_hidden per noise step
  nn::DenseLayer gen_fc1, gen_fc2, gen_fc3;   // per-step head -> sigmoid sample
  nn::DenseLayer disc1, disc2, disc3;         // window -> WS per-sample scores
  int window_size = 10;
  double p_kstest = 0.0;
  ScoreInterval d_score{0.0, 1.0};
  stream::Bounds bounds{0.0, 1.0};
  bool trained = false;

  // Generator pass over a WS-length noise vector; defined when untrained.
  std::vector<double> generate_from(std::span<const double> noise) const;
};

GanModel make_gan(const GanConfig& cfg, std::uint64_t init_seed);

std::pair<GanModel, TrainingReport> gan_train(const std::vector<std::vector<double>>& windows,
                                              const GanConfig& cfg);

// Fresh Gaussian noise through the generator. Throws StateError when the
// model is untrained.
std::vector<double> gan_generate(const GanModel& model, std::uint64_t seed);

// One score in [0,1] per sample of the window. Throws ShapeError when the
// window length does not match.
std::vector<double> discriminator_scores(const GanModel& model, std::span<const double> window);

}  // namespace retrainer::genai
