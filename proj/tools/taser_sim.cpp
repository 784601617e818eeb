// Command-line front end: single runs, multi-seed parameter sweeps, and
// config validation for the trust-aware Sybil detection simulator.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "taser/taser.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string default_out_dir() {
  if (const char* env = std::getenv("TASER_SIM_OUT")) return env;
  return ".";
}

taser::ScenarioConfig load_config(const std::string& path, std::uint64_t* seed_override) {
  taser::ScenarioConfig cfg =
      path.empty() ? taser::ScenarioConfig{} : taser::parse_config(path);
  if (seed_override) cfg.seed = *seed_override;
  cfg.validate_or_throw();
  return cfg;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);  // best effort; writes report failures
}

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir) {
  taser::ScenarioConfig cfg = load_config(config_path, seed ? &*seed : nullptr);
  const taser::RunResult result = taser::run(cfg);
  ensure_dir(out_dir);
  taser::emit_csv(result.metrics, result.log, out_dir);

  const taser::RunMetrics& m = result.metrics;
  std::printf("run seed=%llu sybil_fraction=%g lambda=%g accuracy=%s f1=%s specificity=%s "
              "mean_detection_epochs=%s\n",
              static_cast<unsigned long long>(m.seed), m.sybil_fraction, m.lambda,
              fmt_opt(m.scores.accuracy).c_str(), fmt_opt(m.scores.f1).c_str(),
              fmt_opt(m.scores.specificity).c_str(), fmt_opt(m.detection.mean).c_str());
  std::printf("wrote %s/metrics.csv and %s/events.csv\n", out_dir.c_str(), out_dir.c_str());
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& out_dir, const std::string& param,
              const std::vector<double>& values, int seeds, int jobs) {
  taser::ScenarioConfig cfg = load_config(config_path, seed ? &*seed : nullptr);

  taser::SweepSpec spec;
  spec.parameter = param;
  spec.values = values;
  spec.seeds_per_value = seeds;
  spec.validate_or_throw();

  const taser::SweepResult result = taser::run_sweep(cfg, spec, jobs);
  ensure_dir(out_dir);
  taser::write_file(out_dir + "/metrics.csv", taser::sweep_metrics_csv(result));
  taser::write_file(out_dir + "/summary.csv", taser::sweep_summary_csv(spec, result));

  std::printf("sweep %s over %zu values x %d seeds (%zu runs)\n", spec.parameter.c_str(),
              spec.values.size(), spec.seeds_per_value, result.rows.size());
  for (std::size_t i = 0; i < result.summary.size(); ++i) {
    const taser::RunMetrics& m = result.summary[i];
    std::printf("  %s=%-8g accuracy=%s specificity=%s mean_detection_epochs=%s\n",
                spec.parameter.c_str(), result.summary_values[i],
                fmt_opt(m.scores.accuracy).c_str(), fmt_opt(m.scores.specificity).c_str(),
                fmt_opt(m.detection.mean).c_str());
  }
  std::printf("wrote %s/metrics.csv and %s/summary.csv\n", out_dir.c_str(), out_dir.c_str());
  return kExitOk;
}

int cmd_validate(const std::string& config_path) {
  const taser::ScenarioConfig cfg = load_config(config_path, nullptr);
  std::fputs(taser::dump_config(cfg).c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-aware Sybil detection simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = default_out_dir();
  std::optional<std::uint64_t> seed;

  auto* run_cmd = app.add_subcommand("run", "Execute one scenario and write metrics + events");
  run_cmd->add_option("--config", config_path, "Scenario config file");
  run_cmd->add_option("--seed", seed, "Override the config seed");
  run_cmd->add_option("--out", out_dir, "Output directory (default $TASER_SIM_OUT or .)");

  std::string param;
  std::vector<double> values;
  int seeds = 5;
  int jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep across seeds");
  sweep_cmd->add_option("--config", config_path, "Scenario config file");
  sweep_cmd->add_option("--seed", seed, "Override the config root seed");
  sweep_cmd->add_option("--out", out_dir, "Output directory (default $TASER_SIM_OUT or .)");
  sweep_cmd->add_option("--param", param, "Parameter: sybil_fraction|lambda|delta|beta|alpha|seed")
      ->required();
  sweep_cmd->add_option("--values", values, "Comma-separated parameter values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", seeds, "Seeds per value (default 5)");
  sweep_cmd->add_option("--jobs", jobs, "Parallel runs (default 1)");

  auto* validate_cmd = app.add_subcommand("validate", "Parse a config and print its canonical form");
  validate_cmd->add_option("--config", config_path, "Scenario config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, seed, out_dir);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, seed, out_dir, param, values, seeds, jobs);
    if (validate_cmd->parsed()) return cmd_validate(config_path);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
