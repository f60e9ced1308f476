#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "retrainer/config.hpp"
#include "retrainer/detect/detector.hpp"
#include "retrainer/harness/events.hpp"
#include "retrainer/harness/metrics.hpp"

namespace retrainer::harness {

struct DetectorSummary {
  std::string detector;
  double mean_mrtt = 0.0;  // over triggered changes, in ticks
  std::size_t triggered = 0;
  std::size_t untriggered = 0;
  double mean_mrpt = 0.0;  // over completed jobs, in ticks
  std::size_t open_jobs = 0;
  std::size_t false_triggers = 0;
  // First-change trigger delay per trial; empty = untriggered.
  std::vector<std::optional<std::uint64_t>> first_change_delay;
};

struct ComparisonReport {
  std::string scenario_id;
  std::size_t trials = 0;
  std::vector<DetectorSummary> detectors;
  // Trial-major: runs[trial * kinds + k].
  std::vector<RunReport> runs;
  // Per-trial check that the canonical order gan <= vae <= lof <= threshold
  // holds for whichever of those detectors were run.
  bool ordering_pass = true;
  std::vector<std::string> ordering_failures;
};

// Trains fresh models per trial seed and runs every detector on the same
// stream. Trials are independent and fan out across `cfg.parallel` workers;
// results are ordered by trial index, so the report does not depend on the
// worker count.
ComparisonReport compare_detectors(const Config& cfg,
                                   const std::vector<detect::DetectorKind>& kinds,
                                   std::size_t trials);

// Shared worker pool used by compare and the trial-sweep paths.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace retrainer::harness
