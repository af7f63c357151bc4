#pragma once

namespace uavfl::model {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Squared 3-D distance between a UAV at altitude `altitude` above `uav`
/// and a ground point `user`.
inline double squared_distance(Vec2 uav, Vec2 user, double altitude) {
  const double dx = uav.x - user.x;
  const double dy = uav.y - user.y;
  return dx * dx + dy * dy + altitude * altitude;
}

inline double squared_planar_distance(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace uavfl::model
