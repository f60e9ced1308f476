#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "retrainer/errors.hpp"
#include "retrainer/stream/csv.hpp"
#include "retrainer/stream/normalize.hpp"
#include "retrainer/stream/scenario.hpp"
#include "retrainer/stream/traffic.hpp"

using namespace retrainer;

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct TempCsv {
  std::string path;
  explicit TempCsv(const std::string& name, const std::string& content) : path(name) {
    std::ofstream out(path);
    out << content;
  }
  ~TempCsv() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("cbr: noiseless stream is exactly the configured rate") {
  const auto samples = stream::generate_segment(stream::TrafficModel::cbr(1.0), 100, 1.0, 7);
  for (double v : samples) CHECK(v == 1.0);
}

TEST_CASE("poisson: long-run mean matches the nominal rate") {
  // 10 pkt/s of 125 B is 10,000 bit/s = 0.01 Mbps; 30 pkt/s is 0.03 Mbps.
  for (const auto& [rate, nominal] : {std::pair{10.0, 0.01}, std::pair{30.0, 0.03}}) {
    const std::size_t ticks = 100000;
    const auto samples =
        stream::generate_segment(stream::TrafficModel::poisson(rate, 125.0), ticks, 1.0, 11);
    const double mean = mean_of(samples);
    // Per-tick value is pkts * 1 Mbps at 1 ms ticks; variance of the mean is
    // lambda * (1 Mbps)^2 / ticks.
    const double lambda = rate / 1000.0;
    const double se = std::sqrt(lambda) / std::sqrt(static_cast<double>(ticks));
    CHECK(std::abs(mean - nominal) < 3.0 * se);
  }
}

TEST_CASE("pedestrian: stays within jitter bounds around the base") {
  auto model = stream::TrafficModel::pedestrian(20.0, 0.5);
  const auto samples = stream::generate_segment(model, 5000, 1.0, 13);
  for (double v : samples) {
    CHECK(v >= 20.0 - 0.5 - 1e-9);
    CHECK(v <= 20.0 + 0.5 + 1e-9);
  }
}

TEST_CASE("generate_segment: seeded determinism") {
  const auto model = stream::TrafficModel::poisson(30.0, 125.0);
  const auto a = stream::generate_segment(model, 500, 1.0, 99);
  const auto b = stream::generate_segment(model, 500, 1.0, 99);
  CHECK(a == b);
}

TEST_CASE("build_scenario: change points at segment boundaries") {
  stream::ScenarioSpec spec;
  spec.id = "test";
  spec.seed = 5;
  spec.segments = {{stream::TrafficModel::cbr(1.0), 500, "embb"},
                   {stream::TrafficModel::cbr(0.03, 0.003), 500, "mmtc"},
                   {stream::TrafficModel::cbr(0.01, 0.001), 500, "urllc"}};
  const auto built = stream::build_scenario(spec);
  CHECK(built.samples.size() == 1500);
  CHECK(built.change_points == std::vector<std::size_t>{500, 1000});
  // Distribution levels switch exactly at the boundaries.
  CHECK(built.samples[499] == 1.0);
  CHECK(built.samples[500] < 0.1);
  const std::vector<double> mmtc(built.samples.begin() + 500, built.samples.begin() + 1000);
  CHECK(mean_of(mmtc) == doctest::Approx(0.03).epsilon(0.2));
}

TEST_CASE("build_scenario: single segment has no change points") {
  stream::ScenarioSpec spec;
  spec.id = "solo";
  spec.segments = {{stream::TrafficModel::cbr(2.0), 100, ""}};
  const auto built = stream::build_scenario(spec);
  CHECK(built.change_points.empty());
}

TEST_CASE("build_scenario: identical spec and seed reproduce the stream") {
  stream::ScenarioSpec spec;
  spec.id = "repro";
  spec.seed = 21;
  auto ped = stream::TrafficModel::pedestrian(20.0, 0.3);
  ped.noise_std = 0.45;
  spec.segments = {{ped, 300, ""}, {stream::TrafficModel::poisson(30.0, 125.0), 300, ""}};
  const auto a = stream::build_scenario(spec);
  const auto b = stream::build_scenario(spec);
  CHECK(a.samples == b.samples);
  CHECK(a.change_points == b.change_points);
}

TEST_CASE("build_scenario: empty spec throws") {
  stream::ScenarioSpec spec;
  spec.id = "empty";
  CHECK_THROWS_AS(stream::build_scenario(spec), ConfigError);
}

TEST_CASE("normalize: endpoints, clamping, and round trip") {
  const stream::Bounds bounds{10.0, 30.0};
  CHECK(stream::normalize(10.0, bounds) == 0.0);
  CHECK(stream::normalize(30.0, bounds) == 1.0);
  CHECK(stream::normalize(31.0, bounds) == 1.0);
  CHECK(stream::normalize(-5.0, bounds) == 0.0);
  for (double x : {10.0, 17.3, 25.0, 29.999}) {
    CHECK(stream::denormalize(stream::normalize(x, bounds), bounds) ==
          doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("normalize: degenerate bounds throw") {
  CHECK_THROWS_AS(stream::normalize(1.0, stream::Bounds{5.0, 5.0}), ConfigError);
}

TEST_CASE("load_dataset: well-formed rows parse in order") {
  const TempCsv csv("ds_ok.csv",
                    "timestamp_ms,slice_id,tx_brate\n"
                    "0,embb,1.01\n"
                    "1,embb,0.99\n"
                    "2,embb,1.02\n");
  const auto series = stream::load_dataset(csv.path, {}, "embb");
  CHECK(series.samples == std::vector<double>{1.01, 0.99, 1.02});
  CHECK(series.filled_gaps == 0);
}

TEST_CASE("load_dataset: slice filter and gap forward-fill") {
  const TempCsv csv("ds_gap.csv",
                    "timestamp_ms,slice_id,tx_brate\n"
                    "0,embb,1.0\n"
                    "0,mmtc,0.03\n"
                    "3,embb,2.0\n");
  const auto series = stream::load_dataset(csv.path, {}, "embb");
  CHECK(series.samples == std::vector<double>{1.0, 1.0, 1.0, 2.0});
  CHECK(series.filled_gaps == 2);
}

TEST_CASE("load_dataset: non-monotone timestamps name the offending row") {
  const TempCsv csv("ds_shuffled.csv",
                    "timestamp_ms,slice_id,tx_brate\n"
                    "5,embb,1.0\n"
                    "2,embb,1.1\n");
  try {
    stream::load_dataset(csv.path, {}, "embb");
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
}

TEST_CASE("load_dataset: missing column is reported") {
  const TempCsv csv("ds_missing.csv", "timestamp_ms,slice_id\n0,embb\n");
  try {
    stream::load_dataset(csv.path, {}, "embb");
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(std::string(e.what()).find("tx_brate") != std::string::npos);
  }
}

TEST_CASE("load_dataset: unparsable field is reported with its row") {
  const TempCsv csv("ds_badnum.csv",
                    "timestamp_ms,slice_id,tx_brate\n"
                    "0,embb,fast\n");
  try {
    stream::load_dataset(csv.path, {}, "embb");
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    const std::string what = e.what();
    CHECK(what.find("row 2") != std::string::npos);
    CHECK(what.find("fast") != std::string::npos);
  }
}

TEST_CASE("load_dataset: missing file is an IO error") {
  CHECK_THROWS_AS(stream::load_dataset("does_not_exist.csv", {}, ""), IoError);
}
