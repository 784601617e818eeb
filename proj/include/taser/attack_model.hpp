#pragma once

#include <optional>

#include "taser/mobility.hpp"
#include "taser/params.hpp"
#include "taser/rng.hpp"
#include "taser/types.hpp"

namespace taser {

// Creates the forged identity a transmitter will advertise: a fresh
// pseudonym claiming a position some distance ahead, moving at the
// configured ghost speed.
inline GhostTrack spawn_sybil(const VehicleState& transmitter, Pseudonym ghost_id,
                              const AttackConfig& cfg, Rng& rng, const RoadConfig& road) {
  GhostTrack g;
  g.ghost_id = ghost_id;
  g.offset_from_transmitter = rng.uniform(cfg.ghost_offset_min, cfg.ghost_offset_max);
  g.claimed_arc_position = wrap_arc(transmitter.arc_position + g.offset_from_transmitter, road);
  g.claimed_speed = cfg.ghost_speed;
  g.lane = transmitter.lane;
  return g;
}

// Advances the fabricated track so claimed positions stay kinematically
// self-consistent between beacons.
inline void advance_ghost(GhostTrack& g, double dt, const RoadConfig& road) {
  g.claimed_arc_position = wrap_arc(g.claimed_arc_position + g.claimed_speed * dt, road);
}

// The beacon a transmitter forges for one of its ghosts: exact claimed speed,
// no noise, position taken from the fabricated track.
inline BsmStatus forge_bsm(const GhostTrack& g, Epoch epoch, const RoadConfig& road) {
  BsmStatus bsm;
  bsm.sender = g.ghost_id;
  bsm.velocity = g.claimed_speed;
  bsm.timestamp = epoch;
  bsm.position = to_xy(g.claimed_arc_position, g.lane, road);
  return bsm;
}

// Whether the attacker echoes a challenge nonce aimed at one of its ghosts.
// A ghost has no radio at its claimed position; only the transmitter can
// answer, and only if the directed packet physically reached it.
inline std::optional<std::uint64_t> attacker_respond(AttackerPolicy policy,
                                                     bool transmitter_received,
                                                     std::uint64_t challenge_nonce) {
  if (policy == AttackerPolicy::Silent) return std::nullopt;
  if (!transmitter_received) return std::nullopt;
  return challenge_nonce;
}

}  // namespace taser
