#pragma once
// Spatial iterative-learning controller.
//
// Within one lap the command is
//
//   v_c(l) = sat( v(l) * v*(l) * t_c(l)  +  k_0(l) * v(l) * e_p(l),  v_max )
//
// pace term along the tube, convergence term toward the centerline, with
// v(l) the floored measured tangential pace and k_0(l) = k2 + k3*K(l) +
// k4/r_t(l). Between laps the per-arclength speed multiplier v* is updated by
// a PD-type law on the recorded error profile:
//
//   v*_{k+1}(l) = v*_k(l) - chi( k_p*|e_p|(l) + k_d * d|e_p|/dl (l) )
//
// where chi is piecewise linear through x_th with a gentle slope below and a
// steep slope above: below-threshold error raises v*, above-threshold error
// cuts it. The law reads nothing from the plant but the recorded errors.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fastlap/grid.hpp"
#include "fastlap/plant.hpp"
#include "fastlap/tube.hpp"
#include "fastlap/vec2.hpp"

namespace fastlap {

struct IlcParams {
  double k_p{1.0};        // error weight in the learning argument, 1/m
  double k_d{0.1};        // error-slope weight in the learning argument
  double k2{1.0};         // base centering gain
  double k3{2.0};         // curvature contribution to the centering gain, m
  double k4{0.5};         // tube-narrowness contribution, m
  double x_th{0.5};       // learning threshold: error level the law tolerates
  double chi_alpha{0.4};  // chi slope at or below the threshold
  double chi_beta{2.0};   // chi slope above the threshold
  double v_star_init{1.0};
  double v_star_cap{50.0};

  void validate() const {
    if (!(k_p > 0.0)) throw std::invalid_argument("k_p must be positive");
    if (!(k_d > 0.0)) throw std::invalid_argument("k_d must be positive");
    if (!(x_th > 0.0)) throw std::invalid_argument("x_th must be positive");
    if (!(chi_alpha > 0.0) || !(chi_beta >= chi_alpha)) {
      throw std::invalid_argument("chi slopes need 0 < chi_alpha <= chi_beta");
    }
    if (!(v_star_init > 0.0) || !(v_star_cap > 0.0) || v_star_init > v_star_cap) {
      throw std::invalid_argument("v_star_init must lie in (0, v_star_cap]");
    }
    if (!(k2 > 0.0) || !(k3 > 0.0) || !(k4 > 0.0)) {
      throw std::invalid_argument("gain schedule terms must be positive");
    }
  }
};

// Learned per-arclength speed multiplier; linear interpolation between samples.
struct SpeedProfile {
  ArclengthGrid grid;
  std::vector<double> v_star;
  int iteration{0};

  static SpeedProfile uniform(const ArclengthGrid& grid, double value) {
    return {grid, std::vector<double>(static_cast<size_t>(grid.count), value), 0};
  }

  double operator()(double l) const { return grid_interpolate(grid, v_star, l); }
};

// Recorded |e_p| per grid sample plus its smoothed arclength derivative.
struct ErrorProfile {
  ArclengthGrid grid;
  std::vector<double> e_norm;
  std::vector<double> slope;  // d|e_p|/dl

  // Derivative estimation: 5-sample moving average of |e_p| (window clamped
  // at the ends), then central differences (one-sided at the ends).
  static ErrorProfile from_samples(const ArclengthGrid& grid, std::vector<double> samples) {
    if (static_cast<int>(samples.size()) != grid.count) {
      throw std::invalid_argument("error sample count does not match the grid");
    }
    const int n = grid.count;
    std::vector<double> smooth(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int lo = std::max(0, i - 2);
      const int hi = std::min(n - 1, i + 2);
      double acc = 0.0;
      for (int j = lo; j <= hi; ++j) acc += samples[static_cast<size_t>(j)];
      smooth[static_cast<size_t>(i)] = acc / (hi - lo + 1);
    }
    const double h = grid.spacing();
    std::vector<double> slope(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (i == 0) {
        slope[0] = (smooth[1] - smooth[0]) / h;
      } else if (i == n - 1) {
        slope[static_cast<size_t>(i)] = (smooth[static_cast<size_t>(i)] - smooth[static_cast<size_t>(i - 1)]) / h;
      } else {
        slope[static_cast<size_t>(i)] =
            (smooth[static_cast<size_t>(i + 1)] - smooth[static_cast<size_t>(i - 1)]) / (2.0 * h);
      }
    }
    return {grid, std::move(samples), std::move(slope)};
  }
};

// Learning correction, piecewise linear through (x_th, 0). The below-threshold
// branch extends to negative arguments, so error-free stretches gain
// chi_alpha * x_th of extra v* per iteration.
inline double chi(double x, const IlcParams& p) {
  return x <= p.x_th ? p.chi_alpha * (x - p.x_th) : p.chi_beta * (x - p.x_th);
}

// Centering gain schedule: stiffer on curvature and in narrow tube sections.
inline double gain_k0(double curvature, double tube_radius, const IlcParams& p) {
  return p.k2 + p.k3 * curvature + p.k4 / tube_radius;
}

// Convergence term k_0 * v(l) * e_p. e_p is normal to the tangent by the
// projection's orthogonality, so this never fights the pace term.
inline Vec2 path_convergence(const Projection& proj, double pace, const IlcParams& p) {
  return gain_k0(proj.curvature, proj.radius, p) * pace * proj.e_p;
}

// Pace term v(l) * v*(l) * t_c(l).
inline Vec2 pace_command(const Projection& proj, const SpeedProfile& profile, double pace) {
  return pace * profile(proj.l) * proj.tangent;
}

// Full in-lap command: pace plus convergence, saturated to the plant limit.
inline Vec2 command(const DroneState& state, const Projection& proj, const SpeedProfile& profile,
                    const IlcParams& params, double v_max) {
  const double pace = floored_pace(state.v, proj.tangent);
  return saturate(pace_command(proj, profile, pace) + path_convergence(proj, pace, params), v_max)
      .command;
}

// Between-lap PD update of the learned profile; result clamped to
// [0, v_star_cap]. Profiles and error records must share one grid.
inline SpeedProfile update_profile(const SpeedProfile& profile, const ErrorProfile& errors,
                                   const IlcParams& params) {
  if (!(profile.grid == errors.grid)) {
    throw std::invalid_argument("profile and error grids are misaligned");
  }
  SpeedProfile out = profile;
  out.iteration = profile.iteration + 1;
  for (size_t i = 0; i < out.v_star.size(); ++i) {
    const double arg = params.k_p * errors.e_norm[i] + params.k_d * errors.slope[i];
    out.v_star[i] = std::clamp(profile.v_star[i] - chi(arg, params), 0.0, params.v_star_cap);
  }
  return out;
}

}  // namespace fastlap
