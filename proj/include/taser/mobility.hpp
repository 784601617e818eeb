#pragma once

#include <cmath>
#include <vector>

#include "taser/params.hpp"
#include "taser/rng.hpp"
#include "taser/types.hpp"

namespace taser {

struct GhostTrack {
  Pseudonym ghost_id = 0;
  double claimed_arc_position = 0.0;  // meters along the loop
  double claimed_speed = 2.0;         // m/s
  int lane = 0;
  double offset_from_transmitter = 0.0;  // initial arc displacement, meters
};

// Physical ground truth for one vehicle.
struct VehicleState {
  Pseudonym id = 0;
  double arc_position = 0.0;  // meters in [0, road.length)
  int lane = 0;
  double true_speed = 0.0;  // m/s
  VehicleRole role = VehicleRole::Honest;
  std::vector<GhostTrack> ghosts;  // SybilTransmitter only; one per advertised identity
};

inline double wrap_arc(double arc, const RoadConfig& road) {
  double a = std::fmod(arc, road.length);
  if (a < 0.0) a += road.length;
  return a;
}

// Constant-speed kinematics on the loop.
inline VehicleState advance(VehicleState v, double dt, const RoadConfig& road) {
  v.arc_position = wrap_arc(v.arc_position + v.true_speed * dt, road);
  return v;
}

// Loop coordinate -> plane: a circle of circumference road.length centered at
// the origin, lane k displaced radially outward by k * lane_offset.
inline Vec2 to_xy(double arc_position, int lane, const RoadConfig& road) {
  const double radius = road.length / (2.0 * kPi) + lane * road.lane_offset;
  const double theta = 2.0 * kPi * arc_position / road.length;
  return {radius * std::cos(theta), radius * std::sin(theta)};
}

// Unit tangent (direction of travel) at an arc position.
inline Vec2 road_tangent(double arc_position, const RoadConfig& road) {
  const double theta = 2.0 * kPi * arc_position / road.length;
  return {-std::sin(theta), std::cos(theta)};
}

// Velocity an honest vehicle reports in its beacon: the true speed plus
// measurement noise, never negative. Sybil transmitters do not report for
// themselves; ghost claims come from the attack model.
inline double report_velocity(const VehicleState& v, double noise_sigma, Rng& rng) {
  if (v.role != VehicleRole::Honest) return v.true_speed;
  double reported = v.true_speed + rng.gaussian(0.0, noise_sigma);
  return reported < 0.0 ? 0.0 : reported;
}

}  // namespace taser
