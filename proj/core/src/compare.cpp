#include "retrainer/harness/compare.hpp"

#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "retrainer/errors.hpp"
#include "retrainer/harness/run.hpp"
#include "retrainer/rng.hpp"

namespace retrainer::harness {

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<int>(workers, static_cast<int>(count));
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

ComparisonReport compare_detectors(const Config& cfg,
                                   const std::vector<detect::DetectorKind>& kinds,
                                   std::size_t trials) {
  if (kinds.empty()) throw ConfigError("compare: no detectors selected");
  if (trials < 1) throw ConfigError("compare: need at least one trial");

  ComparisonReport cmp;
  cmp.scenario_id = cfg.scenario_id;
  cmp.trials = trials;
  cmp.runs.resize(trials * kinds.size());

  const SeedSequence seeds(cfg.seed);
  parallel_for(trials, cfg.parallel, [&](std::size_t trial) {
    const std::uint64_t trial_seed = seeds.derive("trial", trial);
    const auto bundle = train_models(cfg, trial_seed);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      cmp.runs[trial * kinds.size() + k] = run_trial(cfg, kinds[k], bundle, trial_seed);
    }
  });

  for (std::size_t k = 0; k < kinds.size(); ++k) {
    DetectorSummary summary;
    summary.detector = detect::to_string(kinds[k]);
    double mrtt_sum = 0.0;
    double mrpt_sum = 0.0;
    std::size_t mrpt_count = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const auto& run = cmp.runs[trial * kinds.size() + k];
      summary.false_triggers += run.false_triggers;
      for (const auto& entry : run.mrtt) {
        if (entry.delay) {
          mrtt_sum += static_cast<double>(*entry.delay);
          ++summary.triggered;
        } else {
          ++summary.untriggered;
        }
      }
      for (const auto& entry : run.mrpt) {
        if (entry.delay) {
          mrpt_sum += static_cast<double>(*entry.delay);
          ++mrpt_count;
        } else {
          ++summary.open_jobs;
        }
      }
      summary.first_change_delay.push_back(
          run.mrtt.empty() ? std::nullopt : run.mrtt.front().delay);
    }
    summary.mean_mrtt = summary.triggered ? mrtt_sum / static_cast<double>(summary.triggered) : 0.0;
    summary.mean_mrpt = mrpt_count ? mrpt_sum / static_cast<double>(mrpt_count) : 0.0;
    cmp.detectors.push_back(std::move(summary));
  }

  // Canonical trigger-delay ordering per trial.
  const detect::DetectorKind canon[] = {detect::DetectorKind::Gan, detect::DetectorKind::Vae,
                                        detect::DetectorKind::Lof, detect::DetectorKind::Threshold};
  for (std::size_t trial = 0; trial < trials; ++trial) {
    double prev = -1.0;
    std::string prev_name;
    for (const auto kind : canon) {
      const auto it = std::find(kinds.begin(), kinds.end(), kind);
      if (it == kinds.end()) continue;
      const std::size_t k = static_cast<std::size_t>(it - kinds.begin());
      const auto& delay = cmp.detectors[k].first_change_delay[trial];
      const double d = delay ? static_cast<double>(*delay)
                             : std::numeric_limits<double>::infinity();
      if (d < prev) {
        cmp.ordering_pass = false;
        cmp.ordering_failures.push_back(
            "trial " + std::to_string(trial) + ": " + detect::to_string(kind) + " triggered at " +
            std::to_string(static_cast<std::uint64_t>(d)) + " ticks before " + prev_name);
      }
      prev = std::max(prev, d);
      prev_name = detect::to_string(kind);
    }
  }
  return cmp;
}

}  // namespace retrainer::harness
