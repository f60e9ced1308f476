#include "retrainer/harness/run.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "retrainer/errors.hpp"
#include "retrainer/harness/metrics.hpp"
#include "retrainer/rng.hpp"

namespace retrainer::harness {

namespace {

stream::Bounds robust_bounds(std::span<const double> data) {
  auto b = stream::bounds_of(data);
  if (!(b.max > b.min)) {
    const double pad = std::max(0.5, std::abs(b.min) * 0.05);
    b.min -= pad;
    b.max += pad;
  }
  return b;
}

nlohmann::json evidence_json(const detect::Evidence& e) {
  nlohmann::json j = nlohmann::json::object();
  if (e.p_value) j["p_value"] = *e.p_value;
  if (e.score_min) j["score_min"] = *e.score_min;
  if (e.score_max) j["score_max"] = *e.score_max;
  if (e.rmse) j["rmse"] = *e.rmse;
  if (e.outlier_samples) j["outlier_samples"] = *e.outlier_samples;
  if (e.consecutive_outlier_windows) j["consecutive_windows"] = *e.consecutive_outlier_windows;
  j["warning_zone"] = e.warning_zone;
  return j;
}

struct InFlightJob {
  std::uint64_t trigger_tick = 0;
  std::uint64_t completion_tick = 0;
  std::uint64_t collect_from_tick = 0;
};

}  // namespace

RunReport run_scenario(const stream::BuiltScenario& scenario, detect::DetectorKind kind,
                       const TrainedBundle& bundle, const Config& cfg, std::uint64_t seed) {
  const int ws = cfg.window_size;
  if (ws < 2) throw ConfigError("window size must be >= 2");
  const bool uses_vae = kind == detect::DetectorKind::Vae;
  const bool uses_gan = kind == detect::DetectorKind::Gan;
  if (uses_vae && (!bundle.vae || bundle.vae->window_size != ws)) {
    throw ConfigError("run: VAE window size does not match the configured window size");
  }
  if (uses_gan && (!bundle.gan || bundle.gan->window_size != ws)) {
    throw ConfigError("run: GAN window size does not match the configured window size");
  }
  if (kind == detect::DetectorKind::Lof && !bundle.lof_reference) {
    throw ConfigError("run: LOF detector needs a reference population");
  }
  if (!bundle.forecaster.trained) throw ConfigError("run: forecaster is not trained");
  const int lookback = bundle.forecaster.lookback;
  if (bundle.serving_warmup.size() < static_cast<std::size_t>(lookback)) {
    throw ConfigError("run: serving warmup shorter than the forecaster lookback");
  }

  const SeedSequence seeds(seed);
  RunReport report;
  report.scenario_id = scenario.id;
  report.detector = detect::to_string(kind);
  report.seed = seed;
  report.change_points = scenario.change_points;
  report.config_echo = config_to_json(cfg);
  report.config_echo["detector"] = report.detector;
  report.config_echo["trial_seed"] = seed;

  auto state = detect::make_detector(kind, cfg.detector_config(kind), seeds.derive("detector"));
  state.vae = bundle.vae;
  state.gan = bundle.gan;
  state.lof_reference = bundle.lof_reference;

  forecast::Forecaster active = bundle.forecaster;

  std::vector<double> history(bundle.serving_warmup.end() - lookback,
                              bundle.serving_warmup.end());
  std::vector<double> window_buf;
  window_buf.reserve(static_cast<std::size_t>(ws));
  std::size_t window_index = 0;
  std::size_t replacements = 0;
  std::optional<InFlightJob> in_flight;
  std::size_t next_change = 0;

  const std::uint64_t total_ticks = scenario.samples.size();
  report.actual.reserve(total_ticks);
  report.predicted.reserve(total_ticks);
  report.verdicts.assign(total_ticks, "");

  for (std::uint64_t t = 0; t < total_ticks; ++t) {
    // Complete a due retrain job before anything else observes tick t.
    if (in_flight && t == in_flight->completion_tick) {
      const std::uint64_t from = std::min<std::uint64_t>(in_flight->collect_from_tick, t);
      std::span<const double> collected(scenario.samples.data() + from,
                                        static_cast<std::size_t>(t - from));
      auto job = forecast::retrain(active, collected, cfg.forecaster, in_flight->trigger_tick);
      active = forecast::replace(active, job);

      nlohmann::json payload = {{"version", active.version},
                                {"samples_used", job.samples_used},
                                {"trigger_tick", in_flight->trigger_tick}};

      // Refresh the detector's own models from recent windows.
      const std::size_t refit_span =
          std::min<std::size_t>(t, cfg.refit.window_count * static_cast<std::size_t>(ws));
      std::span<const double> recent(scenario.samples.data() + (t - refit_span), refit_span);
      detect::RefreshedHandles handles;
      if (refit_span >= cfg.refit.min_windows * static_cast<std::size_t>(ws)) {
        try {
          const auto bounds = robust_bounds(recent);
          const auto windows = chop_windows(stream::normalize(recent, bounds), ws);
          if (uses_vae) {
            genai::VaeConfig refit_cfg = cfg.vae;
            refit_cfg.epochs = cfg.refit.vae_epochs;
            refit_cfg.min_windows = cfg.refit.min_windows;
            refit_cfg.calibration.min_windows = cfg.refit.min_calibration_windows;
            refit_cfg.seed = seeds.derive("refit-vae", replacements);
            auto [refit, ignored] = genai::vae_train(windows, refit_cfg);
            refit.bounds = bounds;
            handles.vae = std::make_shared<genai::VaeModel>(std::move(refit));
          } else if (uses_gan) {
            genai::GanConfig refit_cfg = cfg.gan;
            refit_cfg.epochs = cfg.refit.gan_epochs;
            refit_cfg.min_windows = cfg.refit.min_windows;
            refit_cfg.calibration.min_windows = cfg.refit.min_calibration_windows;
            refit_cfg.seed = seeds.derive("refit-gan", replacements);
            auto [refit, ignored] = genai::gan_train(windows, refit_cfg);
            refit.bounds = bounds;
            handles.gan = std::make_shared<genai::GanModel>(std::move(refit));
          } else if (kind == detect::DetectorKind::Lof) {
            handles.lof_reference = std::make_shared<stats::LofReference>(
                std::vector<double>(recent.begin(), recent.end()), state.config.lof_k);
          }
        } catch (const std::exception& e) {
          payload["refit_skipped"] = e.what();
        }
      } else {
        payload["refit_skipped"] = "not enough recent data";
      }
      detect::reset_after_retrain(state, handles);

      report.events.push_back({t, EventKind::ModelReplaced, report.detector, payload});
      ++replacements;
      in_flight.reset();
    }

    if (next_change < scenario.change_points.size() && t == scenario.change_points[next_change]) {
      report.events.push_back(
          {t, EventKind::ChangeInjected, "", nlohmann::json{{"index", next_change}}});
      ++next_change;
    }

    // Serve, then observe.
    std::span<const double> recent(history.data() + (history.size() - lookback),
                                   static_cast<std::size_t>(lookback));
    report.predicted.push_back(forecast::predict(active, recent));
    const double sample = scenario.samples[t];
    report.actual.push_back(sample);
    history.push_back(sample);
    window_buf.push_back(sample);

    if (window_buf.size() == static_cast<std::size_t>(ws)) {
      const std::uint64_t boundary = t + 1;
      const std::uint64_t window_start = boundary - static_cast<std::uint64_t>(ws);
      detect::Window window;
      window.index = window_index;
      window.start_tick = window_start;

      detect::Verdict verdict;
      switch (kind) {
        case detect::DetectorKind::Vae: {
          window.samples = stream::normalize(window_buf, state.vae->bounds);
          verdict = detect::vae_detector_step(state, window, *state.vae);
          break;
        }
        case detect::DetectorKind::Gan: {
          window.samples = stream::normalize(window_buf, state.gan->bounds);
          verdict = detect::gan_detector_step(state, window, *state.gan);
          break;
        }
        case detect::DetectorKind::Lof: {
          window.samples = window_buf;
          verdict = detect::lof_detector_step(state, window, *state.lof_reference);
          break;
        }
        case detect::DetectorKind::Threshold: {
          window.samples = window_buf;
          std::span<const double> preds(report.predicted.data() + window_start,
                                        static_cast<std::size_t>(ws));
          verdict = detect::threshold_detector_step(state, window, preds);
          break;
        }
      }
      report.verdicts[t] = detect::to_string(verdict.kind);

      if (verdict.kind == detect::VerdictKind::Warning) {
        report.events.push_back(
            {boundary, EventKind::Warning, report.detector, evidence_json(verdict.evidence)});
      } else if (verdict.kind == detect::VerdictKind::RetrainTrigger) {
        auto payload = evidence_json(verdict.evidence);
        payload["window_index"] = verdict.window_index;
        payload["suppressed"] = in_flight.has_value();
        report.events.push_back({boundary, EventKind::RetrainTriggered, report.detector, payload});

        if (!in_flight) {
          InFlightJob job;
          job.trigger_tick = boundary;
          job.collect_from_tick = state.first_warning_tick.value_or(window_start);
          const std::uint64_t collected =
              std::min<std::uint64_t>(boundary - job.collect_from_tick,
                                      cfg.forecaster.max_retrain_samples);
          const auto duration = static_cast<std::uint64_t>(
              std::ceil(cfg.forecaster.retrain_base_ticks +
                        cfg.forecaster.retrain_per_sample_ticks * static_cast<double>(collected)));
          job.completion_tick = boundary + duration;
          report.events.push_back({boundary, EventKind::RetrainStarted, report.detector,
                                   nlohmann::json{{"planned_completion", job.completion_tick},
                                                  {"samples_at_trigger", collected}}});
          in_flight = job;
        }
      }
      window_buf.clear();
      ++window_index;
    }
  }

  report.mrtt = compute_mrtt(report);
  report.mrpt = compute_mrpt(report);
  report.false_triggers = count_false_triggers(report);
  return report;
}

RunReport run_trial(const Config& cfg, detect::DetectorKind kind, const TrainedBundle& bundle,
                    std::uint64_t seed) {
  stream::ScenarioSpec spec = cfg.scenario;
  spec.seed = SeedSequence(seed).derive("scenario-stream");
  if (cfg.csv_path) {
    auto series =
        stream::load_dataset(*cfg.csv_path, cfg.csv_schema, cfg.csv_slice, cfg.tick_period_ms);
    stream::BuiltScenario replay;
    replay.id = cfg.scenario_id;
    replay.samples = std::move(series.samples);
    replay.tick_period_ms = cfg.tick_period_ms;
    return run_scenario(replay, kind, bundle, cfg, seed);
  }
  return run_scenario(stream::build_scenario(spec), kind, bundle, cfg, seed);
}

}  // namespace retrainer::harness
