#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = "cli_stdout_" + std::to_string(counter) + ".txt";
  const fs::path err = "cli_stderr_" + std::to_string(counter) + ".txt";
  ++counter;
  const std::string cmd = std::string(RETRAINER_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WEXITSTATUS(status);
  result.out = slurp(out);
  result.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return result;
}

// Fast desk-scale config shared by the CLI tests.
const std::string& config_path() {
  static const std::string path = [] {
    const std::string p = "cli_quick_config.json";
    std::ofstream out(p);
    out << R"({
  "preset": "qos",
  "scenario": {
    "tick_period_ms": 1.0,
    "segments": [
      {"ticks": 140, "label": "pedestrian",
       "model": {"kind": "pedestrian", "base_mbps": 20.0, "jitter_mbps": 0.3, "noise_std": 0.45}},
      {"ticks": 60, "label": "multi-ue",
       "model": {"kind": "pedestrian", "base_mbps": 24.0, "jitter_mbps": 0.3,
                 "slope_mbps_per_tick": 0.08, "noise_std": 0.45}}
    ]
  },
  "vae": {"epochs": 80},
  "gan": {"epochs": 100},
  "forecaster": {"hidden": 16, "epochs": 8},
  "seed": 11
})";
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("cli: unknown detector exits 1 and lists the valid names") {
  const auto r = run_cli("run --detector oracle --scenario qos --out cli_nowhere");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("vae") != std::string::npos);
  CHECK(r.err.find("gan") != std::string::npos);
  CHECK(r.err.find("lof") != std::string::npos);
  CHECK(r.err.find("threshold") != std::string::npos);
}

TEST_CASE("cli: missing config file exits 2 and names the path") {
  const auto r = run_cli("train --config no_such_config.json --out cli_nowhere");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("no_such_config.json") != std::string::npos);
}

TEST_CASE("cli: invalid config key exits 1 and names the key") {
  const std::string bad = "cli_bad_config.json";
  {
    std::ofstream out(bad);
    out << R"({"window_sizes": 10})";
  }
  const auto r = run_cli("train --config " + bad + " --out cli_nowhere");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("window_sizes") != std::string::npos);
  fs::remove(bad);
}

TEST_CASE("cli: run without artifacts exits 2 and names the missing file") {
  const auto r = run_cli("run --detector gan --config " + config_path() + " --out cli_no_models");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("vae.model") != std::string::npos);
  fs::remove_all("cli_no_models");
}

TEST_CASE("cli: train, run, and report work end to end") {
  const std::string out_dir = "cli_e2e_out";
  fs::remove_all(out_dir);

  const auto train = run_cli("train --config " + config_path() + " --out " + out_dir);
  CHECK(train.exit_code == 0);
  CHECK(fs::exists(out_dir + "/vae.model"));
  CHECK(fs::exists(out_dir + "/gan.model"));
  CHECK(fs::exists(out_dir + "/forecaster.model"));
  CHECK(fs::exists(out_dir + "/calibration.json"));

  // The calibration summary echoes the window size.
  const auto calibration = slurp(out_dir + "/calibration.json");
  CHECK(calibration.find("\"window_size\": 10") != std::string::npos);

  const auto run = run_cli("run --detector gan --config " + config_path() + " --out " + out_dir);
  CHECK(run.exit_code == 0);
  CHECK(fs::exists(out_dir + "/run_qos_gan.json"));
  CHECK(fs::exists(out_dir + "/run_qos_gan_trace.csv"));
  CHECK(run.out.find("trigger delay 10") != std::string::npos);

  const auto report = run_cli("report --out " + out_dir);
  CHECK(report.exit_code == 0);
  CHECK(report.out.find("gan") != std::string::npos);

  fs::remove_all(out_dir);
}

TEST_CASE("cli: compare rejects fewer than two trials") {
  const auto r = run_cli("compare --trials 1 --config " + config_path() + " --out cli_cmp_bad");
  CHECK(r.exit_code == 1);
  fs::remove_all("cli_cmp_bad");
}

TEST_CASE("cli: compare twice with one seed is byte-identical") {
  const std::string dir1 = "cli_cmp_a";
  const std::string dir2 = "cli_cmp_b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);

  const std::string common = "compare --trials 2 --detector vae --detector lof --config " +
                             config_path() + " --seed 5 --out ";
  CHECK(run_cli(common + dir1).exit_code == 0);
  CHECK(run_cli(common + dir2).exit_code == 0);

  for (const auto& name : {"comparison.json", "comparison.csv", "pmf_vae.csv", "pmf_lof.csv"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(dir1 + "/" + name));
    CHECK(slurp(dir1 + "/" + name) == slurp(dir2 + "/" + name));
  }
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("cli: report on an empty directory exits 2") {
  const auto r = run_cli("report --out cli_report_empty_dir");
  CHECK(r.exit_code == 2);
}
