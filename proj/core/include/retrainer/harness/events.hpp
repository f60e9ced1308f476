#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace retrainer::harness {

enum class EventKind { ChangeInjected, Warning, RetrainTriggered, RetrainStarted, ModelReplaced };

std::string to_string(EventKind kind);

struct RunEvent {
  std::uint64_t tick = 0;
  EventKind kind = EventKind::ChangeInjected;
  std::string detector;  // empty for ChangeInjected
  nlohmann::json payload = nlohmann::json::object();
};

struct MrttEntry {
  std::uint64_t change_tick = 0;
  std::optional<std::uint64_t> delay;  // empty = untriggered
};

struct MrptEntry {
  std::uint64_t trigger_tick = 0;
  std::optional<std::uint64_t> delay;  // empty = job still open at run end
};

struct RunReport {
  std::string scenario_id;
  std::string detector;
  std::uint64_t seed = 0;

  std::vector<RunEvent> events;
  std::vector<std::uint64_t> change_points;

  std::vector<MrttEntry> mrtt;
  std::vector<MrptEntry> mrpt;
  std::size_t false_triggers = 0;  // triggers with no preceding change

  // Per-tick traces, one entry per scenario tick.
  std::vector<double> actual;
  std::vector<double> predicted;
  std::vector<std::string> verdicts;  // non-empty on window-final ticks

  nlohmann::json config_echo = nlohmann::json::object();
};

}  // namespace retrainer::harness
