#pragma once
// Bundled benchmark tracks. Each spec lists the corner waypoints handed to
// VirtualTube::build; the realized tube passes through the fillet apexes.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fastlap/tube.hpp"
#include "fastlap/vec2.hpp"

namespace fastlap {

// Waypoint-level description of a track, as read from a track file.
struct TrackSpec {
  std::string name;
  std::vector<Vec2> waypoints;
  double corner_radius{1.0};
  bool closed{false};
  RadiusProfile radius{1.5};

  VirtualTube build_tube() const {
    return VirtualTube::build(waypoints, corner_radius, radius, closed);
  }
};

// 20 m straight line.
inline TrackSpec straight_track() {
  TrackSpec s;
  s.name = "straight";
  s.waypoints = {{0.0, 0.0}, {20.0, 0.0}};
  s.corner_radius = 1.0;
  s.closed = false;
  s.radius = RadiusProfile(1.5);
  return s;
}

// Radius-5 circle: a closed square whose fillet radius equals half the side,
// so the four quarter-turn fillets meet and the straights vanish.
inline TrackSpec circle_track() {
  TrackSpec s;
  s.name = "circle";
  s.waypoints = {{5.0, -5.0}, {5.0, 5.0}, {-5.0, 5.0}, {-5.0, -5.0}};
  s.corner_radius = 5.0;
  s.closed = true;
  s.radius = RadiusProfile(2.0);
  return s;
}

// 20 m square with radius-5 corner fillets (length 40 + 10*pi).
inline TrackSpec square_track() {
  TrackSpec s;
  s.name = "square";
  s.waypoints = {{0.0, 0.0}, {20.0, 0.0}, {20.0, 20.0}, {0.0, 20.0}};
  s.corner_radius = 5.0;
  s.closed = true;
  s.radius = RadiusProfile(2.0);
  return s;
}

// Open slalom: two opposite sweeps around a 9 m bump.
inline TrackSpec scurve_track() {
  TrackSpec s;
  s.name = "scurve";
  s.waypoints = {{0.0, 0.0}, {12.0, 0.0}, {24.0, 9.0}, {36.0, 0.0}, {48.0, 0.0}};
  s.corner_radius = 4.0;
  s.closed = false;
  s.radius = RadiusProfile(1.5);
  return s;
}

// Closed circuit with chicanes on both long sides and rounded ends.
inline TrackSpec soccer_track() {
  TrackSpec s;
  s.name = "soccer";
  s.waypoints = {{0.0, 0.0},   {15.0, 0.0},  {22.5, 4.0},  {30.0, 0.0},
                 {45.0, 0.0},  {49.0, 7.5},  {45.0, 15.0}, {30.0, 15.0},
                 {22.5, 11.0}, {15.0, 15.0}, {0.0, 15.0},  {-4.0, 7.5}};
  s.corner_radius = 2.5;
  s.closed = true;
  s.radius = RadiusProfile(2.0);
  return s;
}

inline const std::vector<std::string>& bundled_track_names() {
  static const std::vector<std::string> names{"straight", "circle", "square", "scurve", "soccer"};
  return names;
}

inline std::optional<TrackSpec> bundled_track(const std::string& name) {
  if (name == "straight") return straight_track();
  if (name == "circle") return circle_track();
  if (name == "square") return square_track();
  if (name == "scurve") return scurve_track();
  if (name == "soccer") return soccer_track();
  return std::nullopt;
}

}  // namespace fastlap
