#pragma once

#include "retrainer/config.hpp"
#include "retrainer/detect/detector.hpp"
#include "retrainer/harness/events.hpp"
#include "retrainer/harness/pipeline.hpp"
#include "retrainer/stream/scenario.hpp"

namespace retrainer::harness {

// Drives one scenario end to end: serve a prediction every tick, evaluate the
// detector at every window boundary, start a retrain job on a trigger, swap
// the forecaster at the job's completion tick, and refresh the detector's
// models from recent data. Triggers raised while a job is in flight are
// logged but do not start a second job.
//
// Throws ConfigError before streaming when the bundle and config disagree on
// the window size.
RunReport run_scenario(const stream::BuiltScenario& scenario, detect::DetectorKind kind,
                       const TrainedBundle& bundle, const Config& cfg, std::uint64_t seed);

// Convenience: builds the scenario stream for the trial seed, then runs it.
RunReport run_trial(const Config& cfg, detect::DetectorKind kind, const TrainedBundle& bundle,
                    std::uint64_t seed);

}  // namespace retrainer::harness
