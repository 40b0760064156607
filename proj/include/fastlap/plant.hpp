#pragma once
// First-order lag point-mass plant:
//
//   dp/dt = v
//   dv/dt = -tau * (v - v_c)
//
// Integrated exactly over one control period (the ODE is linear, so the
// exponential step is closed-form); no integrator drift at any dt. The
// controller never sees tau -- it only issues velocity commands -- which is
// what keeps the learning scheme model-free.

#include <cmath>
#include <stdexcept>

#include "fastlap/vec2.hpp"

namespace fastlap {

// Floor applied to the measured tangential pace before it is used as a
// multiplier or divisor, m/s. Keeps commands and space-domain quantities
// finite when the drone is nearly stopped.
inline constexpr double kPaceFloor = 0.05;

struct PlantParams {
  double tau{10.0};    // velocity loop gain, 1/s
  double v_max{5.0};   // command saturation, m/s
  double dt{0.01};     // control period, s

  void validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("plant tau must be positive");
    if (!(v_max > 0.0)) throw std::invalid_argument("plant v_max must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("plant dt must be positive");
  }
};

struct DroneState {
  Vec2 p;
  Vec2 v;
  double t{0.0};
};

struct Saturation {
  Vec2 command;      // the scaled command
  double kappa{1.0}; // applied scale, 1 when already inside the limit
};

// Radial scaling onto the closed disk of radius v_max; direction preserved.
inline Saturation saturate(const Vec2& v_c, double v_max) {
  const double n = v_c.norm();
  if (n <= v_max) return {v_c, 1.0};
  const double kappa = v_max / n;
  return {v_c * kappa, kappa};
}

// One exact control period under a constant (already saturated) command.
inline DroneState step(const DroneState& s, const Vec2& v_c, const PlantParams& plant) {
  const double decay = std::exp(-plant.tau * plant.dt);
  DroneState out;
  out.v = v_c + (s.v - v_c) * decay;
  out.p = s.p + v_c * plant.dt + (s.v - v_c) * ((1.0 - decay) / plant.tau);
  out.t = s.t + plant.dt;
  return out;
}

// Measured tangential pace v(l) = max(v . t_c, kPaceFloor).
inline double floored_pace(const Vec2& v, const Vec2& tangent) {
  const double raw = dot(v, tangent);
  return raw > kPaceFloor ? raw : kPaceFloor;
}

}  // namespace fastlap
