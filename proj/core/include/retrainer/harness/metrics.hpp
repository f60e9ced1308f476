#pragma once

#include <map>
#include <vector>

#include "retrainer/harness/events.hpp"

namespace retrainer::harness {

// Trigger delay per injected change: for each change point, the first trigger
// after it and at or before the next change. Unmatched changes come back with
// an empty delay.
std::vector<MrttEntry> compute_mrtt(const RunReport& report);

// Replacement delay per started retrain job; jobs still open when the run
// ended carry an empty delay.
std::vector<MrptEntry> compute_mrpt(const RunReport& report);

// Triggers that fired before any change was injected.
std::size_t count_false_triggers(const RunReport& report);

// Discrete MRTT histogram over multiples of the window size.
struct PmfSummary {
  int window_size = 10;
  std::map<std::uint64_t, double> bucket_percent;  // key: delay in windows
  double untriggered_percent = 0.0;
  std::size_t observations = 0;
};

// All reports must share scenario and detector.
PmfSummary pmf_over_trials(const std::vector<RunReport>& reports, int window_size);

}  // namespace retrainer::harness
