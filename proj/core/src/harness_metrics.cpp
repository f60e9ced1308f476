#include "retrainer/harness/metrics.hpp"

#include <algorithm>
#include <limits>

#include "retrainer/errors.hpp"

namespace retrainer::harness {

std::vector<MrttEntry> compute_mrtt(const RunReport& report) {
  std::vector<std::uint64_t> triggers;
  for (const auto& e : report.events) {
    if (e.kind == EventKind::RetrainTriggered) triggers.push_back(e.tick);
  }

  std::vector<MrttEntry> out;
  for (std::size_t k = 0; k < report.change_points.size(); ++k) {
    const std::uint64_t change = report.change_points[k];
    const std::uint64_t upper = k + 1 < report.change_points.size()
                                    ? report.change_points[k + 1]
                                    : std::numeric_limits<std::uint64_t>::max();
    MrttEntry entry;
    entry.change_tick = change;
    for (std::uint64_t t : triggers) {
      if (t > change && t <= upper) {
        entry.delay = t - change;
        break;
      }
    }
    out.push_back(entry);
  }
  return out;
}

std::vector<MrptEntry> compute_mrpt(const RunReport& report) {
  std::vector<MrptEntry> out;
  std::optional<std::uint64_t> open_start;
  for (const auto& e : report.events) {
    if (e.kind == EventKind::RetrainStarted) {
      open_start = e.tick;
    } else if (e.kind == EventKind::ModelReplaced && open_start) {
      out.push_back({*open_start, e.tick - *open_start});
      open_start.reset();
    }
  }
  if (open_start) out.push_back({*open_start, std::nullopt});
  return out;
}

std::size_t count_false_triggers(const RunReport& report) {
  const std::uint64_t first_change = report.change_points.empty()
                                         ? std::numeric_limits<std::uint64_t>::max()
                                         : report.change_points.front();
  std::size_t count = 0;
  for (const auto& e : report.events) {
    if (e.kind == EventKind::RetrainTriggered && e.tick <= first_change) ++count;
  }
  return count;
}

PmfSummary pmf_over_trials(const std::vector<RunReport>& reports, int window_size) {
  if (reports.size() < 2) throw DomainError("pmf_over_trials: need at least 2 reports");
  for (const auto& r : reports) {
    if (r.scenario_id != reports.front().scenario_id || r.detector != reports.front().detector) {
      throw DomainError("pmf_over_trials: reports mix scenarios or detectors");
    }
  }

  PmfSummary pmf;
  pmf.window_size = window_size;
  std::size_t untriggered = 0;
  std::map<std::uint64_t, std::size_t> counts;
  for (const auto& r : reports) {
    for (const auto& entry : r.mrtt) {
      ++pmf.observations;
      if (!entry.delay) {
        ++untriggered;
        continue;
      }
      ++counts[*entry.delay / static_cast<std::uint64_t>(window_size)];
    }
  }
  if (pmf.observations == 0) throw DomainError("pmf_over_trials: no change points in reports");
  for (const auto& [bucket, n] : counts) {
    pmf.bucket_percent[bucket] =
        100.0 * static_cast<double>(n) / static_cast<double>(pmf.observations);
  }
  pmf.untriggered_percent =
      100.0 * static_cast<double>(untriggered) / static_cast<double>(pmf.observations);
  return pmf;
}

}  // namespace retrainer::harness
