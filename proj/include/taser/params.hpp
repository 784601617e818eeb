#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "taser/types.hpp"

namespace taser {

// Trust-assessment knobs. Defaults follow the reference scenario:
// alpha 0.01, beta 0.1, delta 0.4, lambda 0.15, scores bounded at +/-5.
struct TrustParams {
  double alpha = 0.01;    // t-test significance level
  double beta = 0.1;      // trust weighting
  double delta = 0.4;     // velocity threshold fraction around the speed limit
  double lambda = 0.15;   // suspect threshold fraction of the table average
  double trust_min = -5.0;
  double trust_max = 5.0;
  std::size_t window_size = 20;     // velocity samples kept per neighbor
  std::size_t min_t_samples = 3;    // below this the t-test falls back to the delta gate
  Epoch honest_grace_epochs = 50;   // verified-honest entries cannot be re-suspected sooner
};

struct RoadConfig {
  double length = 2000.0;     // loop circumference along lane 0, meters
  int lanes = 2;
  double lane_offset = 3.5;   // radial spacing between lanes, meters
  double speed_limit = 15.0;  // m/s
  double min_gap = 5.0;       // same-lane spacing enforced at placement, meters
};

struct ChannelConfig {
  double omni_range = 300.0;       // beacon broadcast radius, meters
  double beam_range = 300.0;       // challenge beam reach, meters
  double beam_half_angle = 3.0;    // degrees
  Epoch delivery_delay = 0;        // epochs between send and delivery
};

struct ChallengeConfig {
  int max_attempts = 3;
  Epoch per_attempt_timeout = 2;  // epochs
};

struct AttackConfig {
  AttackerPolicy policy = AttackerPolicy::Silent;
  double ghost_speed = 2.0;        // m/s claimed by every ghost identity
  int ghosts_per_attacker = 1;
  double ghost_offset_min = 50.0;  // initial arc displacement from the transmitter, meters
  double ghost_offset_max = 150.0;
};

enum class AggregationMode : std::uint8_t {
  Identity = 0,  // network-level verdict per identity (any observer)
  Observer = 1,  // one verdict per (observer, identity) pair
};

struct ScenarioConfig {
  int vehicles = 100;
  double sybil_fraction = 0.10;
  Epoch duration_epochs = 600;
  double epoch_duration = 0.1;  // seconds per beacon interval
  double noise_sigma = 0.5;     // honest reported-velocity noise, m/s
  double colocation_epsilon = 1.0;  // reported positions closer than this are colocated, meters
  std::uint64_t seed = 1;
  AggregationMode aggregation = AggregationMode::Identity;

  RoadConfig road;
  ChannelConfig channel;
  TrustParams trust;
  ChallengeConfig challenge;
  AttackConfig attack;

  std::vector<std::string> validate() const;
  void validate_or_throw() const;
};

inline std::vector<std::string> ScenarioConfig::validate() const {
  std::vector<std::string> bad;
  auto req = [&](bool ok, const std::string& msg) {
    if (!ok) bad.push_back(msg);
  };

  req(vehicles >= 1, "vehicles must be >= 1");
  req(sybil_fraction >= 0.0 && sybil_fraction <= 1.0, "sybil_fraction must be in [0, 1]");
  req(duration_epochs >= 0, "duration_epochs must be >= 0");
  req(epoch_duration > 0.0, "epoch_duration must be > 0");
  req(noise_sigma >= 0.0, "noise_sigma must be >= 0");
  req(colocation_epsilon >= 0.0, "colocation_epsilon must be >= 0");

  req(road.length > 0.0, "road.length must be > 0");
  req(road.lanes >= 1, "road.lanes must be >= 1");
  req(road.lane_offset >= 0.0, "road.lane_offset must be >= 0");
  req(road.speed_limit > 0.0, "road.speed_limit must be > 0");
  req(road.min_gap >= 0.0, "road.min_gap must be >= 0");
  // Rejection placement needs headroom below the jamming density.
  if (road.lanes >= 1 && road.length > 0.0)
    req(static_cast<double>(vehicles) / road.lanes * road.min_gap <= 0.75 * road.length,
        "placement infeasible: vehicles * min_gap exceeds 75% of lane length");

  req(trust.alpha > 0.0 && trust.alpha < 1.0, "trust.alpha must be in (0, 1)");
  req(trust.beta >= 0.0, "trust.beta must be >= 0");
  req(trust.delta >= 0.0, "trust.delta must be >= 0");
  req(trust.lambda >= 0.0, "trust.lambda must be >= 0");
  req(trust.trust_min < trust.trust_max, "trust.trust_min must be < trust.trust_max");
  // Keeps deduction magnitudes positive over the whole score range.
  req(trust.beta * std::max(std::fabs(trust.trust_min), std::fabs(trust.trust_max)) < 1.0,
      "trust.beta * max(|trust_min|, |trust_max|) must be < 1");
  req(trust.window_size >= 1, "trust.window_size must be >= 1");
  req(trust.min_t_samples >= 2, "trust.min_t_samples must be >= 2");
  req(trust.honest_grace_epochs >= 0, "trust.honest_grace_epochs must be >= 0");

  req(channel.omni_range > 0.0, "channel.omni_range must be > 0");
  req(channel.beam_range > 0.0, "channel.beam_range must be > 0");
  req(channel.beam_half_angle > 0.0 && channel.beam_half_angle < 90.0,
      "channel.beam_half_angle must be in (0, 90) degrees");
  req(channel.delivery_delay >= 0, "channel.delivery_delay must be >= 0");

  req(challenge.max_attempts >= 1, "challenge.max_attempts must be >= 1");
  req(challenge.per_attempt_timeout >= 1, "challenge.per_attempt_timeout must be >= 1");
  req(challenge.per_attempt_timeout > 2 * channel.delivery_delay,
      "challenge.per_attempt_timeout must exceed two delivery delays");

  req(attack.ghost_speed >= 0.0, "attack.ghost_speed must be >= 0");
  req(attack.ghosts_per_attacker >= 1, "attack.ghosts_per_attacker must be >= 1");
  req(attack.ghost_offset_min >= 0.0, "attack.ghost_offset_min must be >= 0");
  req(attack.ghost_offset_max >= attack.ghost_offset_min,
      "attack.ghost_offset_max must be >= attack.ghost_offset_min");

  return bad;
}

inline void ScenarioConfig::validate_or_throw() const {
  auto bad = validate();
  if (bad.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& b : bad) msg += "\n  - " + b;
  throw std::invalid_argument(msg);
}

}  // namespace taser
