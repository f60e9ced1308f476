// Command-line driver: train models, run drift-detection scenarios, compare
// detectors, and summarize existing reports.
//
// Exit codes: 0 success, 1 usage/config errors, 2 I/O or missing artifacts.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "retrainer/config.hpp"
#include "retrainer/errors.hpp"
#include "retrainer/harness/compare.hpp"
#include "retrainer/harness/pipeline.hpp"
#include "retrainer/harness/report_io.hpp"
#include "retrainer/harness/run.hpp"
#include "retrainer/model_io.hpp"

namespace {

namespace fs = std::filesystem;
using retrainer::Config;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

struct CommonOpts {
  std::optional<std::string> config_path;
  std::optional<std::string> scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> parallel;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file")
      ->envname("RETRAINER_CONFIG");
  cmd->add_option("--scenario", opts.scenario, "preset scenario (qos, ns-slow-close, stationary)")
      ->envname("RETRAINER_SCENARIO");
  cmd->add_option("--seed", opts.seed, "master seed")->envname("RETRAINER_SEED");
  cmd->add_option("--out", opts.out, "output directory")->envname("RETRAINER_OUT");
  cmd->add_option("--parallel", opts.parallel, "worker threads for independent trials")
      ->envname("RETRAINER_PARALLEL");
}

Config resolve_config(const CommonOpts& opts) {
  Config cfg;
  if (opts.config_path) {
    cfg = retrainer::load_config_file(*opts.config_path);
  } else {
    cfg = retrainer::preset_config(opts.scenario.value_or("qos"));
  }
  if (opts.scenario && opts.config_path) {
    const auto preset = retrainer::preset_config(*opts.scenario);
    cfg.scenario = preset.scenario;
    cfg.training = preset.training;
    cfg.scenario_id = preset.scenario_id;
    cfg.thresholds = preset.thresholds;
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.out) cfg.out_dir = *opts.out;
  if (opts.parallel) cfg.parallel = *opts.parallel;
  return cfg;
}

struct ArtifactPaths {
  std::string vae, gan, forecaster, calibration;
  explicit ArtifactPaths(const std::string& dir)
      : vae(dir + "/vae.model"),
        gan(dir + "/gan.model"),
        forecaster(dir + "/forecaster.model"),
        calibration(dir + "/calibration.json") {}
};

int cmd_train(const CommonOpts& opts) {
  const Config cfg = resolve_config(opts);
  const auto bundle = retrainer::harness::train_models(cfg, cfg.seed);

  fs::create_directories(cfg.out_dir);
  const ArtifactPaths paths(cfg.out_dir);
  retrainer::save_vae(*bundle.vae, paths.vae);
  retrainer::save_gan(*bundle.gan, paths.gan);
  retrainer::save_forecaster(bundle.forecaster, paths.forecaster);

  nlohmann::json calib;
  calib["window_size"] = cfg.window_size;
  calib["seed"] = cfg.seed;
  calib["scenario"] = cfg.scenario_id;
  calib["bounds"] = {{"min", bundle.bounds.min}, {"max", bundle.bounds.max}};
  calib["vae"] = {{"p_kstest_calibrated", bundle.vae->p_kstest},
                  {"epochs_run", bundle.vae_report.epochs_run},
                  {"calibration_samples", bundle.vae_report.calibration_samples}};
  calib["gan"] = {{"p_kstest_calibrated", bundle.gan->p_kstest},
                  {"d_score_low", bundle.gan->d_score.low},
                  {"d_score_high", bundle.gan->d_score.high},
                  {"epochs_run", bundle.gan_report.epochs_run},
                  {"calibration_samples", bundle.gan_report.calibration_samples},
                  {"warnings", bundle.gan_report.warnings}};
  if (cfg.thresholds.p_vae_kstest) calib["vae"]["p_kstest_override"] = *cfg.thresholds.p_vae_kstest;
  if (cfg.thresholds.p_gan_kstest) calib["gan"]["p_kstest_override"] = *cfg.thresholds.p_gan_kstest;
  calib["config_echo"] = retrainer::config_to_json(cfg);
  std::ofstream out(paths.calibration);
  if (!out) throw retrainer::IoError("cannot write '" + paths.calibration + "'");
  out << calib.dump(2) << '\n';

  std::cout << "trained models for scenario '" << cfg.scenario_id << "' (seed " << cfg.seed
            << ")\n"
            << "  vae:        " << paths.vae << "  p_kstest=" << bundle.vae->p_kstest << "\n"
            << "  gan:        " << paths.gan << "  p_kstest=" << bundle.gan->p_kstest
            << "  d_score=[" << bundle.gan->d_score.low << ", " << bundle.gan->d_score.high
            << "]\n"
            << "  forecaster: " << paths.forecaster << "  version=" << bundle.forecaster.version
            << "\n"
            << "  calibration: " << paths.calibration << "\n";
  for (const auto& w : bundle.gan_report.warnings) std::cout << "  warning: " << w << "\n";
  return kExitOk;
}

retrainer::harness::TrainedBundle load_bundle(const Config& cfg, const ArtifactPaths& paths) {
  for (const auto& p : {paths.vae, paths.gan, paths.forecaster}) {
    if (!fs::exists(p)) {
      throw retrainer::IoError("missing model artifact '" + p + "' (run `retrainer train` first)");
    }
  }
  retrainer::harness::TrainedBundle bundle;
  bundle.vae = std::make_shared<retrainer::genai::VaeModel>(retrainer::load_vae(paths.vae));
  bundle.gan = std::make_shared<retrainer::genai::GanModel>(retrainer::load_gan(paths.gan));
  bundle.forecaster = retrainer::load_forecaster(paths.forecaster);
  bundle.bounds = bundle.vae->bounds;

  // The LOF reference and the serving warmup are rebuilt from the training
  // stream, which is fully determined by (config, seed).
  const auto samples = retrainer::harness::training_samples(cfg, cfg.seed);
  const auto ref_count =
      static_cast<std::ptrdiff_t>(std::min<std::size_t>(samples.size(), 500));
  bundle.lof_reference = std::make_shared<retrainer::stats::LofReference>(
      std::vector<double>(samples.end() - ref_count, samples.end()),
      retrainer::stats::kLofDefaultK);
  bundle.serving_warmup.assign(samples.end() - bundle.forecaster.lookback, samples.end());
  return bundle;
}

int cmd_run(const CommonOpts& opts, const std::string& detector) {
  const Config cfg = resolve_config(opts);
  const auto kind = retrainer::detect::detector_kind_from_string(detector);
  const ArtifactPaths paths(cfg.out_dir);
  const auto bundle = load_bundle(cfg, paths);

  const auto report = retrainer::harness::run_trial(cfg, kind, bundle, cfg.seed);
  const std::string stem = "run_" + cfg.scenario_id + "_" + report.detector;
  const auto path = retrainer::harness::write_run_report(report, cfg.out_dir, stem);

  std::cout << "scenario '" << cfg.scenario_id << "', detector " << report.detector << ", seed "
            << cfg.seed << "\n";
  for (const auto& entry : report.mrtt) {
    std::cout << "  change@" << entry.change_tick << " -> ";
    if (entry.delay) {
      std::cout << "trigger delay " << *entry.delay << " ticks\n";
    } else {
      std::cout << "untriggered\n";
    }
  }
  for (const auto& entry : report.mrpt) {
    std::cout << "  trigger@" << entry.trigger_tick << " -> ";
    if (entry.delay) {
      std::cout << "replaced after " << *entry.delay << " ticks\n";
    } else {
      std::cout << "job still open at run end\n";
    }
  }
  std::cout << "  false triggers: " << report.false_triggers << "\n  report: " << path << "\n";
  return kExitOk;
}

int cmd_compare(const CommonOpts& opts, const std::vector<std::string>& detectors,
                std::size_t trials) {
  if (trials < 2) {
    std::cerr << "compare: --trials must be at least 2\n";
    return kExitUsage;
  }
  const Config cfg = resolve_config(opts);
  std::vector<retrainer::detect::DetectorKind> kinds;
  if (detectors.empty()) {
    kinds = {retrainer::detect::DetectorKind::Gan, retrainer::detect::DetectorKind::Vae,
             retrainer::detect::DetectorKind::Lof, retrainer::detect::DetectorKind::Threshold};
  } else {
    for (const auto& d : detectors) kinds.push_back(retrainer::detect::detector_kind_from_string(d));
  }

  const auto cmp = retrainer::harness::compare_detectors(cfg, kinds, trials);
  retrainer::harness::write_comparison(cmp, cfg.window_size, cfg.out_dir);

  std::cout << "scenario '" << cmp.scenario_id << "', " << cmp.trials << " trials\n";
  std::cout << "  detector    mean MRTT   mean MRPT   untriggered  false\n";
  for (const auto& d : cmp.detectors) {
    std::printf("  %-10s %9.1f   %9.1f   %11zu  %5zu\n", d.detector.c_str(), d.mean_mrtt,
                d.mean_mrpt, d.untriggered, d.false_triggers);
  }
  std::cout << "  ordering (gan <= vae <= lof <= threshold): "
            << (cmp.ordering_pass ? "pass" : "FAIL") << "\n";
  for (const auto& f : cmp.ordering_failures) std::cout << "    " << f << "\n";
  std::cout << "  reports under " << cfg.out_dir << "/\n";
  return kExitOk;
}

int cmd_report(const CommonOpts& opts) {
  const Config cfg = resolve_config(opts);
  std::vector<fs::path> report_files;
  if (!fs::exists(cfg.out_dir)) {
    std::cerr << "report: directory '" << cfg.out_dir << "' does not exist\n";
    return kExitIo;
  }
  for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("run_", 0) == 0 && entry.path().extension() == ".json") {
      report_files.push_back(entry.path());
    }
  }
  std::sort(report_files.begin(), report_files.end());
  if (report_files.empty()) {
    std::cerr << "report: no run_*.json files under '" << cfg.out_dir << "'\n";
    return kExitIo;
  }

  std::cout << "  scenario        detector    changes  triggered  mean MRTT  false\n";
  for (const auto& file : report_files) {
    std::ifstream in(file);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
      std::cerr << "report: '" << file.string() << "' is not valid JSON\n";
      return kExitIo;
    }
    double mrtt_sum = 0.0;
    std::size_t triggered = 0;
    std::size_t changes = 0;
    for (const auto& entry : j.value("mrtt", nlohmann::json::array())) {
      ++changes;
      if (entry.contains("delay_ticks")) {
        mrtt_sum += entry["delay_ticks"].get<double>();
        ++triggered;
      }
    }
    std::printf("  %-15s %-10s %8zu %10zu %10.1f %6zu\n",
                j.value("scenario", "?").c_str(), j.value("detector", "?").c_str(), changes,
                triggered, triggered ? mrtt_sum / static_cast<double>(triggered) : 0.0,
                j.value("false_triggers", std::size_t{0}));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"predictive retraining harness for KPI forecasting models"};
  app.require_subcommand(1);

  CommonOpts train_opts, run_opts, compare_opts, report_opts;
  std::string detector;
  std::vector<std::string> compare_detectors;
  std::size_t trials = 2;

  auto* train = app.add_subcommand("train", "train and calibrate model artifacts");
  add_common(train, train_opts);

  auto* run = app.add_subcommand("run", "run one scenario with one detector");
  add_common(run, run_opts);
  run->add_option("--detector", detector, "vae, gan, lof, or threshold")
      ->envname("RETRAINER_DETECTOR")
      ->required();

  auto* compare = app.add_subcommand("compare", "run all detectors over seeded trials");
  add_common(compare, compare_opts);
  compare->add_option("--detector", compare_detectors, "subset of detectors to compare");
  compare->add_option("--trials", trials, "number of independent trials (>= 2)")
      ->envname("RETRAINER_TRIALS");

  auto* report = app.add_subcommand("report", "summarize run reports in the output directory");
  add_common(report, report_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(train_opts);
    if (run->parsed()) return cmd_run(run_opts, detector);
    if (compare->parsed()) return cmd_compare(compare_opts, compare_detectors, trials);
    if (report->parsed()) return cmd_report(report_opts);
  } catch (const retrainer::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const retrainer::IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
