#pragma once

#include <set>
#include <span>

#include "taser/geometry.hpp"
#include "taser/mobility.hpp"
#include "taser/params.hpp"

namespace taser {

// Unit-disk delivery predicate, shared by the broadcast op and the engine's
// inlined loop so both resolve boundaries identically.
inline bool within_omni_range(Vec2 a, Vec2 b, const ChannelConfig& cfg) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy <= cfg.omni_range * cfg.omni_range;
}

// Unit-disk broadcast: every vehicle other than the sender whose physical
// position lies within omni_range of the sender's position.
inline std::set<Pseudonym> omni_recipients(Vec2 sender_xy, Pseudonym sender_id,
                                           std::span<const VehicleState> all_vehicles,
                                           const ChannelConfig& cfg, const RoadConfig& road) {
  std::set<Pseudonym> out;
  for (const VehicleState& v : all_vehicles) {
    if (v.id == sender_id) continue;
    if (within_omni_range(sender_xy, to_xy(v.arc_position, v.lane, road), cfg)) out.insert(v.id);
  }
  return out;
}

// Directional cone: point is reachable iff it lies within beam_range of the
// origin and within beam_half_angle of the aim direction. The origin itself
// is never contained.
inline bool beam_contains(Vec2 origin_xy, Vec2 aim_xy, Vec2 point_xy, const ChannelConfig& cfg) {
  const Vec2 to_point = point_xy - origin_xy;
  const double d = norm(to_point);
  if (d == 0.0 || d > cfg.beam_range) return false;
  return angle_between(aim_xy - origin_xy, to_point) <= deg_to_rad(cfg.beam_half_angle);
}

// Dead-reckoned position of a suspect from its last report.
inline Vec2 anticipated_position(Vec2 last_xy, double claimed_speed, Vec2 heading_unit,
                                 double elapsed) {
  return last_xy + (claimed_speed * elapsed) * heading_unit;
}

}  // namespace taser
