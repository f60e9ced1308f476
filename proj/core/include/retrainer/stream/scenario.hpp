#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "retrainer/stream/traffic.hpp"

namespace retrainer::stream {

struct Segment {
  TrafficModel model;
  std::size_t ticks = 0;
  std::string label;
};

// Schedule of traffic segments; boundaries between segments are the injected
// change points exported as ground truth for trigger-delay measurement.
struct ScenarioSpec {
  std::string id;
  std::vector<Segment> segments;
  double tick_period_ms = 1.0;
  std::uint64_t seed = 1;
};

struct BuiltScenario {
  std::string id;
  std::vector<double> samples;
  std::vector<std::size_t> change_points;  // ticks where a new segment begins
  double tick_period_ms = 1.0;
};

// Concatenates the segments; each segment draws from its own derived seed so
// inserting one does not reshuffle the others.
BuiltScenario build_scenario(const ScenarioSpec& spec);

}  // namespace retrainer::stream
