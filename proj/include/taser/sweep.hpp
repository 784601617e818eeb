#pragma once

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "taser/config.hpp"
#include "taser/metrics_report.hpp"
#include "taser/rng.hpp"
#include "taser/sim_engine.hpp"

namespace taser {

struct SweepSpec {
  std::string parameter;       // sybil_fraction, lambda, delta, beta, alpha, seed
  std::vector<double> values;  // non-empty
  int seeds_per_value = 1;

  void validate_or_throw() const {
    static const char* known[] = {"sybil_fraction", "lambda", "delta", "beta", "alpha", "seed"};
    bool ok = false;
    for (const char* k : known) ok = ok || parameter == k;
    if (!ok) throw std::invalid_argument("sweep: unrecognized parameter '" + parameter + "'");
    if (values.empty()) throw std::invalid_argument("sweep: value list is empty");
    if (seeds_per_value < 1) throw std::invalid_argument("sweep: seeds per value must be >= 1");
  }
};

// Stable run-seed derivation: hash(root seed, value index, seed index).
// Documented in the README; published sweep numbers depend on it.
inline std::uint64_t sweep_run_seed(std::uint64_t root_seed, std::size_t value_index,
                                    std::size_t seed_index) {
  return mix_seed(root_seed, static_cast<std::uint64_t>(value_index),
                  static_cast<std::uint64_t>(seed_index));
}

struct SweepResult {
  std::vector<RunMetrics> rows;        // one per run, sorted (value index, seed index)
  std::vector<RunMetrics> summary;     // seed-averaged per value (counts are sums)
  std::vector<double> summary_values;  // parameter value per summary row
};

// Runs |values| x seeds_per_value isolated simulations, optionally in
// parallel. Output is independent of execution order and thread count.
inline SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec, int jobs = 1) {
  spec.validate_or_throw();
  if (jobs < 1) jobs = 1;

  struct Job {
    std::size_t value_index;
    std::size_t seed_index;
  };
  std::vector<Job> todo;
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi)
    for (std::size_t si = 0; si < static_cast<std::size_t>(spec.seeds_per_value); ++si)
      todo.push_back({vi, si});

  std::vector<RunMetrics> rows(todo.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      try {
        const Job& job = todo[i];
        ScenarioConfig cfg = base;
        char value_buf[40];
        std::snprintf(value_buf, sizeof(value_buf), "%.17g", spec.values[job.value_index]);
        set_config_value(cfg, spec.parameter, value_buf);
        if (spec.parameter != "seed")
          cfg.seed = sweep_run_seed(base.seed, job.value_index, job.seed_index);
        cfg.validate_or_throw();
        rows[i] = run(cfg, /*record_bsm_rows=*/false).metrics;
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) first_error = ex.what();
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!first_error.empty()) throw std::runtime_error("sweep run failed: " + first_error);

  SweepResult result;
  result.rows = std::move(rows);

  // Seed-averaged summary per parameter value; absent scores are skipped.
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
    RunMetrics avg;
    avg.sybil_fraction = base.sybil_fraction;
    avg.lambda = base.trust.lambda;
    if (spec.parameter == "sybil_fraction") avg.sybil_fraction = spec.values[vi];
    if (spec.parameter == "lambda") avg.lambda = spec.values[vi];

    auto mean_of = [&](auto getter) -> std::optional<double> {
      double sum = 0.0;
      int n = 0;
      for (std::size_t si = 0; si < static_cast<std::size_t>(spec.seeds_per_value); ++si) {
        const RunMetrics& r = result.rows[vi * spec.seeds_per_value + si];
        if (auto v = getter(r)) {
          sum += *v;
          ++n;
        }
      }
      if (n == 0) return std::nullopt;
      return sum / n;
    };
    avg.scores.accuracy = mean_of([](const RunMetrics& r) { return r.scores.accuracy; });
    avg.scores.f1 = mean_of([](const RunMetrics& r) { return r.scores.f1; });
    avg.scores.specificity = mean_of([](const RunMetrics& r) { return r.scores.specificity; });
    avg.detection.mean = mean_of([](const RunMetrics& r) { return r.detection.mean; });
    avg.fp_rate = mean_of([](const RunMetrics& r) { return r.fp_rate; });
    for (std::size_t si = 0; si < static_cast<std::size_t>(spec.seeds_per_value); ++si) {
      const ConfusionCounts& c = result.rows[vi * spec.seeds_per_value + si].counts;
      avg.counts.tp += c.tp;
      avg.counts.fp += c.fp;
      avg.counts.tn += c.tn;
      avg.counts.fn += c.fn;
    }
    result.summary.push_back(std::move(avg));
    result.summary_values.push_back(spec.values[vi]);
  }
  return result;
}

inline std::string sweep_metrics_csv(const SweepResult& r) {
  std::string out = metrics_csv_header();
  for (const RunMetrics& m : r.rows) out += metrics_csv_row(m);
  return out;
}

inline std::string sweep_summary_csv(const SweepSpec& spec, const SweepResult& r) {
  std::string out =
      "param,value,runs,accuracy,f1,specificity,mean_detection_epochs,fp_rate\n";
  for (std::size_t vi = 0; vi < r.summary.size(); ++vi) {
    const RunMetrics& m = r.summary[vi];
    out += spec.parameter;
    out += ',';
    detail::append_double(out, r.summary_values[vi]);
    out += ',';
    detail::append_i64(out, spec.seeds_per_value);
    out += ',';
    detail::append_opt(out, m.scores.accuracy);
    out += ',';
    detail::append_opt(out, m.scores.f1);
    out += ',';
    detail::append_opt(out, m.scores.specificity);
    out += ',';
    detail::append_opt(out, m.detection.mean);
    out += ',';
    detail::append_opt(out, m.fp_rate);
    out += '\n';
  }
  return out;
}

}  // namespace taser
