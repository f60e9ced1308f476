#include "retrainer/config.hpp"

#include <cstdlib>
#include <fstream>

#include "retrainer/errors.hpp"

namespace retrainer {

namespace {

using nlohmann::json;

stream::TrafficModel traffic_from_json(const json& j) {
  stream::TrafficModel m;
  m.kind = stream::traffic_kind_from_string(j.at("kind").get<std::string>());
  for (auto& [key, value] : j.items()) {
    if (key == "kind") continue;
    if (key == "rate_mbps") m.rate_mbps = value.get<double>();
    else if (key == "pkt_rate_per_s") m.pkt_rate_per_s = value.get<double>();
    else if (key == "pkt_size_bytes") m.pkt_size_bytes = value.get<double>();
    else if (key == "base_mbps") m.base_mbps = value.get<double>();
    else if (key == "slope_mbps_per_tick") m.slope_mbps_per_tick = value.get<double>();
    else if (key == "jitter_mbps") m.jitter_mbps = value.get<double>();
    else if (key == "noise_std") m.noise_std = value.get<double>();
    else throw ConfigError("unknown traffic model key '" + key + "'");
  }
  return m;
}

json traffic_to_json(const stream::TrafficModel& m) {
  json j;
  j["kind"] = stream::to_string(m.kind);
  switch (m.kind) {
    case stream::TrafficKind::Cbr:
      j["rate_mbps"] = m.rate_mbps;
      j["noise_std"] = m.noise_std;
      break;
    case stream::TrafficKind::Poisson:
      j["pkt_rate_per_s"] = m.pkt_rate_per_s;
      j["pkt_size_bytes"] = m.pkt_size_bytes;
      break;
    case stream::TrafficKind::PedestrianQos:
      j["base_mbps"] = m.base_mbps;
      j["slope_mbps_per_tick"] = m.slope_mbps_per_tick;
      j["jitter_mbps"] = m.jitter_mbps;
      j["noise_std"] = m.noise_std;
      break;
  }
  return j;
}

stream::ScenarioSpec scenario_from_json(const json& j, const std::string& id) {
  stream::ScenarioSpec spec;
  spec.id = id;
  for (auto& [key, value] : j.items()) {
    if (key == "tick_period_ms") {
      spec.tick_period_ms = value.get<double>();
    } else if (key == "segments") {
      for (const auto& seg : value) {
        stream::Segment s;
        s.ticks = seg.at("ticks").get<std::size_t>();
        s.label = seg.value("label", "");
        s.model = traffic_from_json(seg.at("model"));
        spec.segments.push_back(std::move(s));
      }
    } else {
      throw ConfigError("unknown scenario key '" + key + "'");
    }
  }
  return spec;
}

json scenario_to_json(const stream::ScenarioSpec& spec) {
  json j;
  j["tick_period_ms"] = spec.tick_period_ms;
  auto& segs = j["segments"] = json::array();
  for (const auto& s : spec.segments) {
    segs.push_back({{"ticks", s.ticks}, {"label", s.label}, {"model", traffic_to_json(s.model)}});
  }
  return j;
}

}  // namespace

detect::DetectorConfig Config::detector_config(detect::DetectorKind kind) const {
  detect::DetectorConfig d;
  d.window_size = window_size;
  if (kind == detect::DetectorKind::Vae) d.p_kstest_override = thresholds.p_vae_kstest;
  if (kind == detect::DetectorKind::Gan) d.p_kstest_override = thresholds.p_gan_kstest;
  d.rmse_threshold = thresholds.rmse_threshold;
  d.t_ds_ms = thresholds.t_ds_ms;
  d.t_e2e_ms = thresholds.t_e2e_ms;
  return d;
}

std::vector<std::string> preset_names() { return {"qos", "ns-slow-close", "stationary"}; }

Config preset_config(const std::string& name) {
  Config cfg;
  cfg.window_size = 10;
  cfg.tick_period_ms = 1.0;
  cfg.vae.window_size = 10;
  cfg.gan.window_size = 10;
  cfg.forecaster.lookback = 10;

  if (name == "qos") {
    // Pedestrian traffic, then additional users with staggered data rates
    // joining from tick 140 as a step plus a slow ramp.
    cfg.scenario_id = "qos";
    cfg.thresholds.p_vae_kstest = 0.00182;
    cfg.thresholds.p_gan_kstest = 0.00206;
    cfg.thresholds.rmse_threshold = 15.0;
    cfg.thresholds.t_ds_ms = 20.0;
    cfg.thresholds.t_e2e_ms = 5.0;

    auto pedestrian = stream::TrafficModel::pedestrian(20.0, 0.3);
    pedestrian.noise_std = 0.45;
    auto multi_ue = stream::TrafficModel::pedestrian(24.0, 0.3, 0.08);
    multi_ue.noise_std = 0.45;

    cfg.training.id = "qos-training";
    cfg.training.tick_period_ms = 1.0;
    cfg.training.segments = {{pedestrian, 2000, "pedestrian"}};

    cfg.scenario.id = "qos";
    cfg.scenario.tick_period_ms = 1.0;
    cfg.scenario.segments = {{pedestrian, 140, "pedestrian"}, {multi_ue, 360, "multi-ue"}};
  } else if (name == "ns-slow-close") {
    // Slice switchovers at 500 ms and 1000 ms. Slice rates follow the
    // nominal eMBB / mMTC / uRLLC loads; per-tick values are smoothed
    // throughput measurements rather than raw per-millisecond packet counts,
    // which at these rates would make every 10-sample window degenerate.
    cfg.scenario_id = "ns-slow-close";
    cfg.thresholds.p_vae_kstest = 0.01235;
    cfg.thresholds.p_gan_kstest = 0.01568;
    cfg.thresholds.rmse_threshold = 15.0;
    cfg.thresholds.t_ds_ms = 20.0;
    cfg.thresholds.t_e2e_ms = 5.0;

    const auto embb = stream::TrafficModel::cbr(1.0, 0.02);
    const auto mmtc = stream::TrafficModel::cbr(0.03, 0.003);
    const auto urllc = stream::TrafficModel::cbr(0.01, 0.001);

    cfg.training.id = "ns-training";
    cfg.training.tick_period_ms = 1.0;
    cfg.training.segments = {{embb, 2000, "embb"}};

    cfg.scenario.id = "ns-slow-close";
    cfg.scenario.tick_period_ms = 1.0;
    cfg.scenario.segments = {{embb, 500, "embb"}, {mmtc, 500, "mmtc"}, {urllc, 500, "urllc"}};
  } else if (name == "stationary") {
    cfg.scenario_id = "stationary";
    auto pedestrian = stream::TrafficModel::pedestrian(20.0, 0.3);
    pedestrian.noise_std = 0.45;

    cfg.training.id = "stationary-training";
    cfg.training.tick_period_ms = 1.0;
    cfg.training.segments = {{pedestrian, 2000, "pedestrian"}};

    cfg.scenario.id = "stationary";
    cfg.scenario.tick_period_ms = 1.0;
    cfg.scenario.segments = {{pedestrian, 10000, "pedestrian"}};
  } else {
    throw ConfigError("unknown preset '" + name + "' (valid: qos, ns-slow-close, stationary)");
  }
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");

  Config cfg;
  if (j.contains("preset")) cfg = preset_config(j["preset"].get<std::string>());

  for (auto& [key, value] : j.items()) {
    if (key == "preset") {
      continue;
    } else if (key == "window_size") {
      cfg.window_size = value.get<int>();
      if (cfg.window_size < 2) throw ConfigError("window_size must be >= 2");
      cfg.vae.window_size = cfg.window_size;
      cfg.gan.window_size = cfg.window_size;
      cfg.forecaster.lookback = cfg.window_size;
    } else if (key == "tick_period_ms") {
      cfg.tick_period_ms = value.get<double>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "out_dir") {
      cfg.out_dir = value.get<std::string>();
    } else if (key == "parallel") {
      cfg.parallel = value.get<int>();
    } else if (key == "thresholds") {
      for (auto& [tk, tv] : value.items()) {
        if (tk == "p_vae_kstest") cfg.thresholds.p_vae_kstest = tv.get<double>();
        else if (tk == "p_gan_kstest") cfg.thresholds.p_gan_kstest = tv.get<double>();
        else if (tk == "rmse") cfg.thresholds.rmse_threshold = tv.get<double>();
        else if (tk == "t_ds_ms") cfg.thresholds.t_ds_ms = tv.get<double>();
        else if (tk == "t_e2e_ms") cfg.thresholds.t_e2e_ms = tv.get<double>();
        else throw ConfigError("unknown thresholds key '" + tk + "'");
      }
    } else if (key == "vae") {
      for (auto& [vk, vv] : value.items()) {
        if (vk == "epochs") cfg.vae.epochs = vv.get<int>();
        else if (vk == "hidden") cfg.vae.hidden = vv.get<int>();
        else if (vk == "latent_dim") cfg.vae.latent_dim = vv.get<int>();
        else if (vk == "batch_size") cfg.vae.batch_size = vv.get<int>();
        else if (vk == "learning_rate") cfg.vae.learning_rate = vv.get<double>();
        else if (vk == "recon_weight") cfg.vae.recon_weight = vv.get<double>();
        else throw ConfigError("unknown vae key '" + vk + "'");
      }
    } else if (key == "gan") {
      for (auto& [gk, gv] : value.items()) {
        if (gk == "epochs") cfg.gan.epochs = gv.get<int>();
        else if (gk == "gen_hidden") cfg.gan.gen_hidden = gv.get<int>();
        else if (gk == "batch_size") cfg.gan.batch_size = gv.get<int>();
        else if (gk == "learning_rate") cfg.gan.learning_rate = gv.get<double>();
        else throw ConfigError("unknown gan key '" + gk + "'");
      }
    } else if (key == "forecaster") {
      for (auto& [fk, fv] : value.items()) {
        if (fk == "hidden") cfg.forecaster.hidden = fv.get<int>();
        else if (fk == "num_layers") cfg.forecaster.num_layers = fv.get<int>();
        else if (fk == "epochs") cfg.forecaster.epochs = fv.get<int>();
        else if (fk == "batch_size") cfg.forecaster.batch_size = fv.get<int>();
        else if (fk == "batches_per_epoch") cfg.forecaster.batches_per_epoch = fv.get<int>();
        else if (fk == "learning_rate") cfg.forecaster.learning_rate = fv.get<double>();
        else if (fk == "retrain_epochs") cfg.forecaster.retrain_epochs = fv.get<int>();
        else if (fk == "retrain_base_ticks") cfg.forecaster.retrain_base_ticks = fv.get<double>();
        else if (fk == "retrain_per_sample_ticks")
          cfg.forecaster.retrain_per_sample_ticks = fv.get<double>();
        else if (fk == "max_retrain_samples")
          cfg.forecaster.max_retrain_samples = fv.get<std::size_t>();
        else throw ConfigError("unknown forecaster key '" + fk + "'");
      }
    } else if (key == "refit") {
      for (auto& [rk, rv] : value.items()) {
        if (rk == "window_count") cfg.refit.window_count = rv.get<std::size_t>();
        else if (rk == "min_windows") cfg.refit.min_windows = rv.get<std::size_t>();
        else if (rk == "vae_epochs") cfg.refit.vae_epochs = rv.get<int>();
        else if (rk == "gan_epochs") cfg.refit.gan_epochs = rv.get<int>();
        else throw ConfigError("unknown refit key '" + rk + "'");
      }
    } else if (key == "scenario") {
      if (value.is_string()) {
        const auto preset = preset_config(value.get<std::string>());
        cfg.scenario = preset.scenario;
        cfg.training = preset.training;
        cfg.scenario_id = preset.scenario_id;
      } else {
        cfg.scenario = scenario_from_json(value, cfg.scenario_id);
      }
    } else if (key == "scenario_id") {
      cfg.scenario_id = value.get<std::string>();
      cfg.scenario.id = cfg.scenario_id;
    } else if (key == "training") {
      cfg.training = scenario_from_json(value, "training");
    } else if (key == "csv") {
      for (auto& [ck, cv] : value.items()) {
        if (ck == "path") cfg.csv_path = cv.get<std::string>();
        else if (ck == "timestamp_col") cfg.csv_schema.timestamp_col = cv.get<std::string>();
        else if (ck == "slice_col") cfg.csv_schema.slice_col = cv.get<std::string>();
        else if (ck == "metric_col") cfg.csv_schema.metric_col = cv.get<std::string>();
        else if (ck == "slice") cfg.csv_slice = cv.get<std::string>();
        else throw ConfigError("unknown csv key '" + ck + "'");
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

std::vector<std::string> apply_env_overrides(Config& cfg) {
  std::vector<std::string> applied;
  if (const char* seed = std::getenv("RETRAINER_SEED")) {
    cfg.seed = std::strtoull(seed, nullptr, 10);
    applied.push_back("RETRAINER_SEED");
  }
  if (const char* out = std::getenv("RETRAINER_OUT")) {
    cfg.out_dir = out;
    applied.push_back("RETRAINER_OUT");
  }
  if (const char* scenario = std::getenv("RETRAINER_SCENARIO")) {
    const auto preset = preset_config(scenario);
    cfg.scenario = preset.scenario;
    cfg.training = preset.training;
    cfg.scenario_id = preset.scenario_id;
    cfg.thresholds = preset.thresholds;
    applied.push_back("RETRAINER_SCENARIO");
  }
  if (const char* parallel = std::getenv("RETRAINER_PARALLEL")) {
    cfg.parallel = static_cast<int>(std::strtol(parallel, nullptr, 10));
    applied.push_back("RETRAINER_PARALLEL");
  }
  return applied;
}

nlohmann::json config_to_json(const Config& cfg) {
  json j;
  j["window_size"] = cfg.window_size;
  j["tick_period_ms"] = cfg.tick_period_ms;
  j["seed"] = cfg.seed;
  j["scenario_id"] = cfg.scenario_id;
  j["parallel"] = cfg.parallel;

  json th;
  if (cfg.thresholds.p_vae_kstest) th["p_vae_kstest"] = *cfg.thresholds.p_vae_kstest;
  if (cfg.thresholds.p_gan_kstest) th["p_gan_kstest"] = *cfg.thresholds.p_gan_kstest;
  th["rmse"] = cfg.thresholds.rmse_threshold;
  th["t_ds_ms"] = cfg.thresholds.t_ds_ms;
  th["t_e2e_ms"] = cfg.thresholds.t_e2e_ms;
  j["thresholds"] = th;

  j["vae"] = {{"epochs", cfg.vae.epochs},
              {"hidden", cfg.vae.hidden},
              {"latent_dim", cfg.vae.latent_dim},
              {"batch_size", cfg.vae.batch_size},
              {"learning_rate", cfg.vae.learning_rate},
              {"recon_weight", cfg.vae.recon_weight}};
  j["gan"] = {{"epochs", cfg.gan.epochs},
              {"gen_hidden", cfg.gan.gen_hidden},
              {"batch_size", cfg.gan.batch_size},
              {"learning_rate", cfg.gan.learning_rate}};
  j["forecaster"] = {{"hidden", cfg.forecaster.hidden},
                     {"num_layers", cfg.forecaster.num_layers},
                     {"epochs", cfg.forecaster.epochs},
                     {"batch_size", cfg.forecaster.batch_size},
                     {"batches_per_epoch", cfg.forecaster.batches_per_epoch},
                     {"learning_rate", cfg.forecaster.learning_rate},
                     {"retrain_epochs", cfg.forecaster.retrain_epochs},
                     {"retrain_base_ticks", cfg.forecaster.retrain_base_ticks},
                     {"retrain_per_sample_ticks", cfg.forecaster.retrain_per_sample_ticks},
                     {"max_retrain_samples", cfg.forecaster.max_retrain_samples}};
  j["refit"] = {{"window_count", cfg.refit.window_count},
                {"min_windows", cfg.refit.min_windows},
                {"vae_epochs", cfg.refit.vae_epochs},
                {"gan_epochs", cfg.refit.gan_epochs}};
  j["scenario"] = scenario_to_json(cfg.scenario);
  j["training"] = scenario_to_json(cfg.training);
  if (cfg.csv_path) {
    j["csv"] = {{"path", *cfg.csv_path},
                {"timestamp_col", cfg.csv_schema.timestamp_col},
                {"slice_col", cfg.csv_schema.slice_col},
                {"metric_col", cfg.csv_schema.metric_col},
                {"slice", cfg.csv_slice}};
  }
  return j;
}

}  // namespace retrainer
