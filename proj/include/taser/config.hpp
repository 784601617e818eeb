#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "taser/event_log.hpp"
#include "taser/params.hpp"

namespace taser {

// Human-readable key = value configuration with [section] headers mirroring
// the module configs. Unknown keys are errors; every invariant is validated
// after parsing. The full schema is documented in the README and in
// configs/desk.cfg.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": expected a number, got '" + v + "'");
  }
}

inline std::int64_t parse_int(const std::string& v, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": expected an integer, got '" + v + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    unsigned long long i = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": expected an unsigned integer, got '" + v + "'");
  }
}

}  // namespace detail

// Applies one dotted key ("trust.lambda") or bare sweep-parameter name
// ("lambda") to the config. Throws ConfigError for unknown keys.
inline void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value,
                             const std::string& ctx = "") {
  using detail::parse_double;
  using detail::parse_int;
  using detail::parse_u64;
  const std::string where = ctx.empty() ? key : ctx + " (" + key + ")";

  // [scenario]
  if (key == "scenario.vehicles" || key == "vehicles")
    c.vehicles = static_cast<int>(parse_int(value, where));
  else if (key == "scenario.sybil_fraction" || key == "sybil_fraction")
    c.sybil_fraction = parse_double(value, where);
  else if (key == "scenario.duration_epochs" || key == "duration_epochs")
    c.duration_epochs = parse_int(value, where);
  else if (key == "scenario.epoch_duration" || key == "epoch_duration")
    c.epoch_duration = parse_double(value, where);
  else if (key == "scenario.noise_sigma" || key == "noise_sigma")
    c.noise_sigma = parse_double(value, where);
  else if (key == "scenario.colocation_epsilon" || key == "colocation_epsilon")
    c.colocation_epsilon = parse_double(value, where);
  else if (key == "scenario.seed" || key == "seed")
    c.seed = parse_u64(value, where);
  else if (key == "scenario.aggregation" || key == "aggregation") {
    if (value == "identity") c.aggregation = AggregationMode::Identity;
    else if (value == "observer") c.aggregation = AggregationMode::Observer;
    else throw ConfigError(where + ": expected 'identity' or 'observer', got '" + value + "'");
  }
  // [road]
  else if (key == "road.length") c.road.length = parse_double(value, where);
  else if (key == "road.lanes") c.road.lanes = static_cast<int>(parse_int(value, where));
  else if (key == "road.lane_offset") c.road.lane_offset = parse_double(value, where);
  else if (key == "road.speed_limit") c.road.speed_limit = parse_double(value, where);
  else if (key == "road.min_gap") c.road.min_gap = parse_double(value, where);
  // [trust]
  else if (key == "trust.alpha" || key == "alpha") c.trust.alpha = parse_double(value, where);
  else if (key == "trust.beta" || key == "beta") c.trust.beta = parse_double(value, where);
  else if (key == "trust.delta" || key == "delta") c.trust.delta = parse_double(value, where);
  else if (key == "trust.lambda" || key == "lambda") c.trust.lambda = parse_double(value, where);
  else if (key == "trust.trust_min") c.trust.trust_min = parse_double(value, where);
  else if (key == "trust.trust_max") c.trust.trust_max = parse_double(value, where);
  else if (key == "trust.window_size")
    c.trust.window_size = static_cast<std::size_t>(parse_int(value, where));
  else if (key == "trust.min_t_samples")
    c.trust.min_t_samples = static_cast<std::size_t>(parse_int(value, where));
  else if (key == "trust.honest_grace_epochs")
    c.trust.honest_grace_epochs = parse_int(value, where);
  // [channel]
  else if (key == "channel.omni_range") c.channel.omni_range = parse_double(value, where);
  else if (key == "channel.beam_range") c.channel.beam_range = parse_double(value, where);
  else if (key == "channel.beam_half_angle")
    c.channel.beam_half_angle = parse_double(value, where);
  else if (key == "channel.delivery_delay") c.channel.delivery_delay = parse_int(value, where);
  // [challenge]
  else if (key == "challenge.max_attempts")
    c.challenge.max_attempts = static_cast<int>(parse_int(value, where));
  else if (key == "challenge.per_attempt_timeout")
    c.challenge.per_attempt_timeout = parse_int(value, where);
  // [attack]
  else if (key == "attack.policy") {
    if (value == "silent") c.attack.policy = AttackerPolicy::Silent;
    else if (value == "opportunistic") c.attack.policy = AttackerPolicy::Opportunistic;
    else throw ConfigError(where + ": expected 'silent' or 'opportunistic', got '" + value + "'");
  } else if (key == "attack.ghost_speed") c.attack.ghost_speed = parse_double(value, where);
  else if (key == "attack.ghosts_per_attacker")
    c.attack.ghosts_per_attacker = static_cast<int>(parse_int(value, where));
  else if (key == "attack.ghost_offset_min")
    c.attack.ghost_offset_min = parse_double(value, where);
  else if (key == "attack.ghost_offset_max")
    c.attack.ghost_offset_max = parse_double(value, where);
  else
    throw ConfigError(where + ": unknown configuration key '" + key + "'");
}

// Parses configuration text. Defaults are the reference scenario values, so
// an empty file is a valid desk-scale config.
inline ScenarioConfig parse_config_text(const std::string& text,
                                        const std::string& source = "<string>") {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string ctx = source + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(ctx + ": malformed section header '" + line + "'");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(ctx + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ctx + ": expected 'key = value', got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(ctx + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    set_config_value(c, full, value, ctx);
  }

  const auto bad = c.validate();
  if (!bad.empty()) {
    std::string msg = source + ": invalid configuration:";
    for (const auto& b : bad) msg += "\n  - " + b;
    throw ConfigError(msg);
  }
  return c;
}

inline ScenarioConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

// Canonical dump; parse_config_text(dump_config(c)) reproduces c exactly.
inline std::string dump_config(const ScenarioConfig& c) {
  std::string out;
  auto kv = [&out](const char* key, double v) {
    out += key;
    out += " = ";
    detail::append_double(out, v);
    out += '\n';
  };
  auto kvi = [&out](const char* key, std::int64_t v) {
    out += key;
    out += " = ";
    detail::append_i64(out, v);
    out += '\n';
  };

  out += "[scenario]\n";
  kvi("vehicles", c.vehicles);
  kv("sybil_fraction", c.sybil_fraction);
  kvi("duration_epochs", c.duration_epochs);
  kv("epoch_duration", c.epoch_duration);
  kv("noise_sigma", c.noise_sigma);
  kv("colocation_epsilon", c.colocation_epsilon);
  out += "seed = ";
  detail::append_u64(out, c.seed);
  out += '\n';
  out += std::string("aggregation = ") +
         (c.aggregation == AggregationMode::Identity ? "identity" : "observer") + "\n";

  out += "\n[road]\n";
  kv("length", c.road.length);
  kvi("lanes", c.road.lanes);
  kv("lane_offset", c.road.lane_offset);
  kv("speed_limit", c.road.speed_limit);
  kv("min_gap", c.road.min_gap);

  out += "\n[trust]\n";
  kv("alpha", c.trust.alpha);
  kv("beta", c.trust.beta);
  kv("delta", c.trust.delta);
  kv("lambda", c.trust.lambda);
  kv("trust_min", c.trust.trust_min);
  kv("trust_max", c.trust.trust_max);
  kvi("window_size", static_cast<std::int64_t>(c.trust.window_size));
  kvi("min_t_samples", static_cast<std::int64_t>(c.trust.min_t_samples));
  kvi("honest_grace_epochs", c.trust.honest_grace_epochs);

  out += "\n[channel]\n";
  kv("omni_range", c.channel.omni_range);
  kv("beam_range", c.channel.beam_range);
  kv("beam_half_angle", c.channel.beam_half_angle);
  kvi("delivery_delay", c.channel.delivery_delay);

  out += "\n[challenge]\n";
  kvi("max_attempts", c.challenge.max_attempts);
  kvi("per_attempt_timeout", c.challenge.per_attempt_timeout);

  out += "\n[attack]\n";
  out += std::string("policy = ") +
         (c.attack.policy == AttackerPolicy::Silent ? "silent" : "opportunistic") + "\n";
  kv("ghost_speed", c.attack.ghost_speed);
  kvi("ghosts_per_attacker", c.attack.ghosts_per_attacker);
  kv("ghost_offset_min", c.attack.ghost_offset_min);
  kv("ghost_offset_max", c.attack.ghost_offset_max);
  return out;
}

}  // namespace taser
