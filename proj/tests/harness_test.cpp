#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "retrainer/config.hpp"
#include "retrainer/errors.hpp"
#include "retrainer/harness/compare.hpp"
#include "retrainer/harness/metrics.hpp"
#include "retrainer/harness/pipeline.hpp"
#include "retrainer/harness/report_io.hpp"
#include "retrainer/harness/run.hpp"

using namespace retrainer;
using harness::EventKind;

namespace {

// Desk-scale configuration: the qos preset with lighter models so a full
// trial stays around a second.
Config quick_qos() {
  auto cfg = preset_config("qos");
  cfg.vae.epochs = 100;
  cfg.vae.early_stop_min_epochs = 100;
  cfg.gan.epochs = 120;
  cfg.gan.converge_min_epochs = 120;
  cfg.forecaster.hidden = 16;
  cfg.forecaster.epochs = 10;
  cfg.refit.vae_epochs = 40;
  cfg.refit.gan_epochs = 40;
  return cfg;
}

Config quick_stationary() {
  auto cfg = preset_config("stationary");
  cfg.scenario.segments[0].ticks = 3000;
  cfg.vae.epochs = 100;
  cfg.vae.early_stop_min_epochs = 100;
  cfg.gan.epochs = 120;
  cfg.gan.converge_min_epochs = 120;
  cfg.forecaster.hidden = 16;
  cfg.forecaster.epochs = 10;
  return cfg;
}

const harness::TrainedBundle& qos_bundle() {
  static const harness::TrainedBundle bundle = harness::train_models(quick_qos(), 777);
  return bundle;
}

harness::RunReport qos_run(detect::DetectorKind kind) {
  return harness::run_trial(quick_qos(), kind, qos_bundle(), 777);
}

}  // namespace

TEST_CASE("run_scenario: gan triggers one window after the qos change") {
  const auto report = qos_run(detect::DetectorKind::Gan);
  REQUIRE(report.mrtt.size() == 1);
  REQUIRE(report.mrtt.front().delay.has_value());
  CHECK(*report.mrtt.front().delay == 10);
  CHECK(report.change_points == std::vector<std::uint64_t>{140});
}

TEST_CASE("run_scenario: event causality and tick ordering") {
  const auto report = qos_run(detect::DetectorKind::Gan);
  std::uint64_t last_tick = 0;
  bool triggered = false;
  bool started = false;
  std::size_t starts = 0, replaced = 0;
  for (const auto& e : report.events) {
    CHECK(e.tick >= last_tick);
    last_tick = e.tick;
    if (e.kind == EventKind::RetrainTriggered) triggered = true;
    if (e.kind == EventKind::RetrainStarted) {
      CHECK(triggered);
      started = true;
      ++starts;
    }
    if (e.kind == EventKind::ModelReplaced) {
      CHECK(started);
      ++replaced;
    }
  }
  CHECK(replaced <= starts);
  CHECK(starts >= 1);
}

TEST_CASE("run_scenario: serving completeness and trace alignment") {
  const auto report = qos_run(detect::DetectorKind::Vae);
  const std::size_t ticks = 500;
  CHECK(report.actual.size() == ticks);
  CHECK(report.predicted.size() == ticks);
  CHECK(report.verdicts.size() == ticks);
  // Verdicts appear exactly on window-final ticks.
  for (std::size_t t = 0; t < ticks; ++t) {
    if ((t + 1) % 10 == 0) {
      CHECK(!report.verdicts[t].empty());
    } else {
      CHECK(report.verdicts[t].empty());
    }
  }
}

TEST_CASE("run_scenario: mrtt quantized to whole windows") {
  for (auto kind : {detect::DetectorKind::Gan, detect::DetectorKind::Lof}) {
    const auto report = qos_run(kind);
    for (const auto& entry : report.mrtt) {
      if (entry.delay) CHECK(*entry.delay % 10 == 0);
    }
  }
}

TEST_CASE("run_scenario: stationary stream produces no trigger events for lof and threshold") {
  const auto cfg = quick_stationary();
  const auto bundle = harness::train_models(cfg, 31);
  for (auto kind : {detect::DetectorKind::Lof, detect::DetectorKind::Threshold}) {
    const auto report = harness::run_trial(cfg, kind, bundle, 31);
    std::size_t triggers = 0;
    for (const auto& e : report.events) {
      if (e.kind == EventKind::RetrainTriggered) ++triggers;
    }
    CHECK(triggers == 0);
    CHECK(report.false_triggers == 0);
  }
}

TEST_CASE("run_scenario: window-size mismatch fails before streaming") {
  auto cfg = quick_qos();
  cfg.window_size = 12;  // bundle was trained at 10
  CHECK_THROWS_AS(harness::run_trial(cfg, detect::DetectorKind::Vae, qos_bundle(), 777),
                  ConfigError);
}

TEST_CASE("compute_mrtt: pinned timelines") {
  harness::RunReport report;
  report.change_points = {140};
  report.events.push_back({150, EventKind::RetrainTriggered, "gan", {}});
  auto mrtt = harness::compute_mrtt(report);
  REQUIRE(mrtt.size() == 1);
  CHECK(*mrtt.front().delay == 10);

  report.events.clear();
  report.events.push_back({280, EventKind::RetrainTriggered, "threshold", {}});
  mrtt = harness::compute_mrtt(report);
  CHECK(*mrtt.front().delay == 140);

  report.events.clear();
  mrtt = harness::compute_mrtt(report);
  CHECK_FALSE(mrtt.front().delay.has_value());
}

TEST_CASE("compute_mrtt: triggers match their nearest preceding change") {
  harness::RunReport report;
  report.change_points = {500, 1000};
  report.events.push_back({510, EventKind::RetrainTriggered, "gan", {}});
  report.events.push_back({1010, EventKind::RetrainTriggered, "gan", {}});
  const auto mrtt = harness::compute_mrtt(report);
  REQUIRE(mrtt.size() == 2);
  CHECK(*mrtt[0].delay == 10);
  CHECK(*mrtt[1].delay == 10);
}

TEST_CASE("compute_mrpt: pinned timelines and the open-job marker") {
  harness::RunReport report;
  report.events.push_back({150, EventKind::RetrainTriggered, "gan", {}});
  report.events.push_back({150, EventKind::RetrainStarted, "gan", {}});
  report.events.push_back({260, EventKind::ModelReplaced, "gan", {}});
  report.events.push_back({510, EventKind::RetrainTriggered, "gan", {}});
  report.events.push_back({510, EventKind::RetrainStarted, "gan", {}});
  report.events.push_back({628, EventKind::ModelReplaced, "gan", {}});
  report.events.push_back({900, EventKind::RetrainTriggered, "gan", {}});
  report.events.push_back({900, EventKind::RetrainStarted, "gan", {}});
  const auto mrpt = harness::compute_mrpt(report);
  REQUIRE(mrpt.size() == 3);
  CHECK(*mrpt[0].delay == 110);
  CHECK(*mrpt[1].delay == 118);
  CHECK_FALSE(mrpt[2].delay.has_value());
}

TEST_CASE("count_false_triggers: pre-change triggers only") {
  harness::RunReport report;
  report.change_points = {140};
  report.events.push_back({50, EventKind::RetrainTriggered, "gan", {}});
  report.events.push_back({150, EventKind::RetrainTriggered, "gan", {}});
  CHECK(harness::count_false_triggers(report) == 1);
}

TEST_CASE("pmf_over_trials: degenerate single bucket and error paths") {
  harness::RunReport a;
  a.scenario_id = "qos";
  a.detector = "gan";
  a.change_points = {140};
  a.mrtt = {{140, 10}};
  auto b = a;

  const auto pmf = harness::pmf_over_trials({a, b}, 10);
  REQUIRE(pmf.bucket_percent.size() == 1);
  CHECK(pmf.bucket_percent.at(1) == 100.0);
  CHECK(pmf.untriggered_percent == 0.0);

  auto c = a;
  c.scenario_id = "other";
  CHECK_THROWS_AS(harness::pmf_over_trials({a, c}, 10), DomainError);
  CHECK_THROWS_AS(harness::pmf_over_trials({a}, 10), DomainError);
}

TEST_CASE("pmf_over_trials: untriggered mass is excluded from the buckets") {
  harness::RunReport a;
  a.scenario_id = "qos";
  a.detector = "threshold";
  a.change_points = {140};
  a.mrtt = {{140, 10}};
  auto b = a;
  b.mrtt = {{140, std::nullopt}};
  const auto pmf = harness::pmf_over_trials({a, b}, 10);
  CHECK(pmf.bucket_percent.at(1) == 50.0);
  CHECK(pmf.untriggered_percent == 50.0);
  double total = pmf.untriggered_percent;
  for (const auto& [bucket, pct] : pmf.bucket_percent) total += pct;
  CHECK(total == doctest::Approx(100.0));
}

TEST_CASE("compare_detectors: identical detector listed twice gives identical rows") {
  auto cfg = quick_qos();
  cfg.scenario.segments[1].ticks = 160;  // stop shortly after the change
  const auto cmp = harness::compare_detectors(
      cfg, {detect::DetectorKind::Vae, detect::DetectorKind::Vae}, 2);
  REQUIRE(cmp.detectors.size() == 2);
  CHECK(cmp.detectors[0].mean_mrtt == cmp.detectors[1].mean_mrtt);
  CHECK(cmp.detectors[0].first_change_delay == cmp.detectors[1].first_change_delay);
}

TEST_CASE("report files: run report and trace are deterministic") {
  const auto report = qos_run(detect::DetectorKind::Gan);
  const std::string dir = "harness_report_out";
  const auto path1 = harness::write_run_report(report, dir, "first");
  const auto path2 = harness::write_run_report(report, dir, "second");

  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  auto normalize_stem = [](std::string s, const std::string& from, const std::string& to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos)) {
      s.replace(pos, from.size(), to);
      pos += to.size();
    }
    return s;
  };
  CHECK(normalize_stem(slurp(path1), "first", "x") == normalize_stem(slurp(path2), "second", "x"));
  CHECK(slurp(dir + "/first_trace.csv") == slurp(dir + "/second_trace.csv"));
  std::filesystem::remove_all(dir);
}
