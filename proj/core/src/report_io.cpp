#include "retrainer/harness/report_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "retrainer/errors.hpp"

namespace retrainer::harness {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, ptr);
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ChangeInjected:
      return "change_injected";
    case EventKind::Warning:
      return "warning";
    case EventKind::RetrainTriggered:
      return "retrain_triggered";
    case EventKind::RetrainStarted:
      return "retrain_started";
    case EventKind::ModelReplaced:
      return "model_replaced";
  }
  return "change_injected";
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["format"] = "retrainer-run-report";
  j["format_version"] = 1;
  j["scenario"] = report.scenario_id;
  j["detector"] = report.detector;
  j["seed"] = report.seed;
  j["change_points"] = report.change_points;
  j["false_triggers"] = report.false_triggers;

  auto& events = j["events"] = nlohmann::json::array();
  for (const auto& e : report.events) {
    events.push_back({{"tick", e.tick},
                      {"kind", to_string(e.kind)},
                      {"detector", e.detector},
                      {"payload", e.payload}});
  }

  auto& mrtt = j["mrtt"] = nlohmann::json::array();
  for (const auto& entry : report.mrtt) {
    nlohmann::json row{{"change_tick", entry.change_tick}};
    if (entry.delay) {
      row["delay_ticks"] = *entry.delay;
    } else {
      row["untriggered"] = true;
    }
    mrtt.push_back(row);
  }
  auto& mrpt = j["mrpt"] = nlohmann::json::array();
  for (const auto& entry : report.mrpt) {
    nlohmann::json row{{"trigger_tick", entry.trigger_tick}};
    if (entry.delay) {
      row["delay_ticks"] = *entry.delay;
    } else {
      row["open"] = true;
    }
    mrpt.push_back(row);
  }

  j["config_echo"] = report.config_echo;
  return j;
}

std::string write_run_report(const RunReport& report, const std::string& out_dir,
                             const std::string& stem) {
  std::filesystem::create_directories(out_dir);
  const std::string report_path = out_dir + "/" + stem + ".json";
  const std::string trace_path = out_dir + "/" + stem + "_trace.csv";

  auto j = report_to_json(report);
  j["trace_file"] = stem + "_trace.csv";
  std::ofstream out(report_path);
  if (!out) throw IoError("cannot write '" + report_path + "'");
  out << j.dump(2) << '\n';

  std::ofstream trace(trace_path);
  if (!trace) throw IoError("cannot write '" + trace_path + "'");
  trace << "tick,actual,predicted,verdict\n";
  for (std::size_t t = 0; t < report.actual.size(); ++t) {
    trace << t << ',' << format_double(report.actual[t]) << ','
          << format_double(report.predicted[t]) << ',' << report.verdicts[t] << '\n';
  }
  return report_path;
}

std::string write_pmf_csv(const PmfSummary& pmf, const std::string& out_dir,
                          const std::string& stem) {
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/" + stem + ".csv";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "delay_windows,delay_ticks,percent\n";
  for (const auto& [bucket, percent] : pmf.bucket_percent) {
    out << bucket << ',' << bucket * static_cast<std::uint64_t>(pmf.window_size) << ','
        << format_double(percent) << '\n';
  }
  out << "untriggered,," << format_double(pmf.untriggered_percent) << '\n';
  return path;
}

void write_comparison(const ComparisonReport& cmp, int window_size, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  nlohmann::json j;
  j["format"] = "retrainer-comparison";
  j["format_version"] = 1;
  j["scenario"] = cmp.scenario_id;
  j["trials"] = cmp.trials;
  j["ordering_pass"] = cmp.ordering_pass;
  j["ordering_failures"] = cmp.ordering_failures;
  auto& rows = j["detectors"] = nlohmann::json::array();
  for (const auto& d : cmp.detectors) {
    nlohmann::json delays = nlohmann::json::array();
    for (const auto& delay : d.first_change_delay) {
      if (delay) {
        delays.push_back(*delay);
      } else {
        delays.push_back(nullptr);
      }
    }
    rows.push_back({{"detector", d.detector},
                    {"mean_mrtt_ticks", d.mean_mrtt},
                    {"triggered", d.triggered},
                    {"untriggered", d.untriggered},
                    {"mean_mrpt_ticks", d.mean_mrpt},
                    {"open_jobs", d.open_jobs},
                    {"false_triggers", d.false_triggers},
                    {"first_change_delay_ticks", delays}});
  }
  {
    std::ofstream out(out_dir + "/comparison.json");
    if (!out) throw IoError("cannot write comparison.json");
    out << j.dump(2) << '\n';
  }
  {
    std::ofstream csv(out_dir + "/comparison.csv");
    if (!csv) throw IoError("cannot write comparison.csv");
    csv << "detector,mean_mrtt_ticks,triggered,untriggered,mean_mrpt_ticks,open_jobs,"
           "false_triggers\n";
    for (const auto& d : cmp.detectors) {
      csv << d.detector << ',' << format_double(d.mean_mrtt) << ',' << d.triggered << ','
          << d.untriggered << ',' << format_double(d.mean_mrpt) << ',' << d.open_jobs << ','
          << d.false_triggers << '\n';
    }
  }

  if (cmp.trials >= 2 && !cmp.runs.empty() && !cmp.runs.front().change_points.empty()) {
    const std::size_t kinds = cmp.detectors.size();
    for (std::size_t k = 0; k < kinds; ++k) {
      std::vector<RunReport> runs;
      for (std::size_t trial = 0; trial < cmp.trials; ++trial) {
        runs.push_back(cmp.runs[trial * kinds + k]);
      }
      const auto pmf = pmf_over_trials(runs, window_size);
      write_pmf_csv(pmf, out_dir, "pmf_" + cmp.detectors[k].detector);
    }
  }
}

}  // namespace retrainer::harness
