#include "retrainer/stream/scenario.hpp"

#include "retrainer/errors.hpp"
#include "retrainer/rng.hpp"

namespace retrainer::stream {

BuiltScenario build_scenario(const ScenarioSpec& spec) {
  if (spec.segments.empty()) throw ConfigError("scenario '" + spec.id + "' has no segments");
  for (const auto& s : spec.segments) {
    if (s.ticks == 0) throw ConfigError("scenario '" + spec.id + "' has a zero-length segment");
  }

  BuiltScenario built;
  built.id = spec.id;
  built.tick_period_ms = spec.tick_period_ms;

  const SeedSequence seeds(spec.seed);
  std::size_t tick = 0;
  for (std::size_t i = 0; i < spec.segments.size(); ++i) {
    const auto& seg = spec.segments[i];
    if (i > 0) built.change_points.push_back(tick);
    auto samples = generate_segment(seg.model, seg.ticks, spec.tick_period_ms,
                                    seeds.derive("segment", i));
    built.samples.insert(built.samples.end(), samples.begin(), samples.end());
    tick += seg.ticks;
  }
  return built;
}

}  // namespace retrainer::stream
