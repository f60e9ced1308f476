#include "retrainer/stream/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "retrainer/errors.hpp"

namespace retrainer::stream {

TrafficModel TrafficModel::cbr(double rate, double noise) {
  TrafficModel m;
  m.kind = TrafficKind::Cbr;
  m.rate_mbps = rate;
  m.noise_std = noise;
  return m;
}

TrafficModel TrafficModel::poisson(double pkt_rate, double pkt_size) {
  TrafficModel m;
  m.kind = TrafficKind::Poisson;
  m.pkt_rate_per_s = pkt_rate;
  m.pkt_size_bytes = pkt_size;
  return m;
}

TrafficModel TrafficModel::pedestrian(double base, double jitter, double slope) {
  TrafficModel m;
  m.kind = TrafficKind::PedestrianQos;
  m.base_mbps = base;
  m.jitter_mbps = jitter;
  m.slope_mbps_per_tick = slope;
  return m;
}

std::vector<double> generate_segment(const TrafficModel& model, std::size_t ticks,
                                     double tick_period_ms, std::uint64_t seed) {
  if (tick_period_ms <= 0.0) throw ConfigError("generate_segment: tick period must be positive");
  std::vector<double> out(ticks, 0.0);
  Rng rng(seed);

  switch (model.kind) {
    case TrafficKind::Cbr: {
      if (model.rate_mbps <= 0.0) throw ConfigError("cbr: rate must be positive");
      for (std::size_t t = 0; t < ticks; ++t) {
        double v = model.rate_mbps;
        if (model.noise_std > 0.0) v += rng.gaussian(0.0, model.noise_std);
        out[t] = std::max(v, 0.0);
      }
      break;
    }
    case TrafficKind::Poisson: {
      if (model.pkt_rate_per_s <= 0.0 || model.pkt_size_bytes <= 0.0) {
        throw ConfigError("poisson: rate and packet size must be positive");
      }
      const double lambda = model.pkt_rate_per_s * tick_period_ms / 1000.0;
      const double bits_per_pkt = model.pkt_size_bytes * 8.0;
      const double tick_seconds = tick_period_ms / 1000.0;
      for (std::size_t t = 0; t < ticks; ++t) {
        const double pkts = static_cast<double>(rng.poisson(lambda));
        // bits within the tick over the tick duration, in Mbps
        out[t] = pkts * bits_per_pkt / tick_seconds / 1e6;
      }
      break;
    }
    case TrafficKind::PedestrianQos: {
      if (model.jitter_mbps < 0.0) throw ConfigError("pedestrian: jitter must be nonnegative");
      // Mean-reverting walk clipped to +-jitter around the drifting base.
      // Reversion is fast enough that windows share one marginal.
      double walk = 0.0;
      const double step = model.jitter_mbps * 0.25;
      for (std::size_t t = 0; t < ticks; ++t) {
        walk = 0.7 * walk + rng.gaussian(0.0, step);
        walk = std::clamp(walk, -model.jitter_mbps, model.jitter_mbps);
        double v = model.base_mbps + model.slope_mbps_per_tick * static_cast<double>(t) + walk;
        if (model.noise_std > 0.0) v += rng.gaussian(0.0, model.noise_std);
        out[t] = std::max(v, 0.0);
      }
      break;
    }
  }
  return out;
}

std::string to_string(TrafficKind kind) {
  switch (kind) {
    case TrafficKind::Cbr:
      return "cbr";
    case TrafficKind::Poisson:
      return "poisson";
    case TrafficKind::PedestrianQos:
      return "pedestrian";
  }
  return "cbr";
}

TrafficKind traffic_kind_from_string(const std::string& s) {
  if (s == "cbr") return TrafficKind::Cbr;
  if (s == "poisson") return TrafficKind::Poisson;
  if (s == "pedestrian") return TrafficKind::PedestrianQos;
  throw ConfigError("unknown traffic kind '" + s + "'");
}

}  // namespace retrainer::stream
