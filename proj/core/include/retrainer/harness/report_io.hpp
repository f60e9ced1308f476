#pragma once

#include <string>

#include "retrainer/harness/compare.hpp"
#include "retrainer/harness/events.hpp"
#include "retrainer/harness/metrics.hpp"

namespace retrainer::harness {

// Report writers. All output is deterministic byte-for-byte given the same
// report contents: keys are ordered, doubles use shortest round-trip
// formatting, and nothing time- or path-dependent is embedded.

nlohmann::json report_to_json(const RunReport& report);

// Writes <stem>.json and <stem>_trace.csv under out_dir; returns the report
// path. The trace has one row per tick: tick,actual,predicted,verdict.
std::string write_run_report(const RunReport& report, const std::string& out_dir,
                             const std::string& stem);

std::string write_pmf_csv(const PmfSummary& pmf, const std::string& out_dir,
                          const std::string& stem);

// comparison.json plus comparison.csv (one row per detector) and a PMF CSV
// per detector when trials >= 2.
void write_comparison(const ComparisonReport& cmp, int window_size, const std::string& out_dir);

std::string format_double(double v);

}  // namespace retrainer::harness
