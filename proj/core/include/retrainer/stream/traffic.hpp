#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "retrainer/rng.hpp"

namespace retrainer::stream {

enum class TrafficKind { Cbr, Poisson, PedestrianQos };

// Per-tick throughput source for one scenario segment. All outputs are in
// Mbps at the configured tick period.
//
//   Cbr            constant bit rate plus Gaussian noise(0, noise_std)
//   Poisson        packet arrivals: count ~ Poisson(pkt_rate * tick) scaled
//                  by packet size, expressed as Mbps within the tick
//   PedestrianQos  smoothed random walk around a base profile with bounded
//                  jitter and an optional linear drift, standing in for a
//                  single walking user's measured throughput
struct TrafficModel {
  TrafficKind kind = TrafficKind::Cbr;

  // Cbr
  double rate_mbps = 1.0;

  // Poisson
  double pkt_rate_per_s = 10.0;
  double pkt_size_bytes = 125.0;

  // PedestrianQos
  double base_mbps = 20.0;
  double slope_mbps_per_tick = 0.0;
  double jitter_mbps = 0.5;

  // Gaussian noise applied by Cbr (and PedestrianQos measurement noise).
  double noise_std = 0.0;

  static TrafficModel cbr(double rate, double noise = 0.0);
  static TrafficModel poisson(double pkt_rate, double pkt_size);
  static TrafficModel pedestrian(double base, double jitter, double slope = 0.0);
};

// Generates `ticks` consecutive throughput samples. Pure given (model, seed).
std::vector<double> generate_segment(const TrafficModel& model, std::size_t ticks,
                                     double tick_period_ms, std::uint64_t seed);

std::string to_string(TrafficKind kind);
TrafficKind traffic_kind_from_string(const std::string& s);

}  // namespace retrainer::stream
