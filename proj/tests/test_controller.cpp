#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fastlap/controller.hpp"

using namespace fastlap;
using Catch::Approx;

namespace {
Projection straight_proj(double e_y) {
  Projection p;
  p.l = 3.0;
  p.m = {3.0, 0.0};
  p.e_p = {0.0, e_y};
  p.tangent = {1.0, 0.0};
  p.curvature = 0.0;
  p.radius = 2.0;
  return p;
}
}  // namespace

TEST_CASE("chi is piecewise linear through the threshold") {
  const IlcParams p;
  REQUIRE(chi(p.x_th, p) == 0.0);
  REQUIRE(chi(0.0, p) == Approx(-0.2));          // alpha branch below threshold
  REQUIRE(chi(0.25, p) == Approx(-0.1));
  REQUIRE(chi(1.5, p) == Approx(2.0));           // beta branch above
  REQUIRE(chi(-1.0, p) == Approx(-0.6));         // alpha branch extends below zero
}

TEST_CASE("centering gain schedule") {
  const IlcParams p;
  REQUIRE(gain_k0(0.2, 2.0, p) == Approx(1.0 + 2.0 * 0.2 + 0.5 / 2.0));  // 1.65
  REQUIRE(gain_k0(0.0, 1e9, p) == Approx(p.k2).epsilon(1e-6));
  // Stiffer in curves and narrow passages.
  REQUIRE(gain_k0(0.5, 2.0, p) > gain_k0(0.2, 2.0, p));
  REQUIRE(gain_k0(0.2, 0.5, p) > gain_k0(0.2, 2.0, p));
}

TEST_CASE("path convergence pushes toward the centerline, scaled by pace") {
  const IlcParams p;
  const Projection proj = straight_proj(1.0);
  const Vec2 conv = path_convergence(proj, 2.0, p);
  // k0 = 1 + 0 + 0.25 = 1.25; term = 1.25 * 2 * (0, 1).
  REQUIRE(conv.x == 0.0);
  REQUIRE(conv.y == Approx(2.5));

  REQUIRE(path_convergence(straight_proj(0.0), 2.0, p).norm() == 0.0);

  // Homogeneous in the error.
  const Vec2 twice = path_convergence(straight_proj(2.0), 2.0, p);
  REQUIRE(twice.y == Approx(2.0 * conv.y));
}

TEST_CASE("pace command is tangent aligned") {
  const ArclengthGrid grid{10.0, 11};
  const SpeedProfile prof = SpeedProfile::uniform(grid, 1.5);
  const Projection proj = straight_proj(0.0);
  const Vec2 cmd = pace_command(proj, prof, 2.0);
  REQUIRE(cmd.x == Approx(3.0));
  REQUIRE(cmd.y == 0.0);
}

TEST_CASE("full command: centered flight is purely tangential") {
  const IlcParams params;
  const ArclengthGrid grid{10.0, 11};
  const SpeedProfile prof = SpeedProfile::uniform(grid, 1.2);
  DroneState state;
  state.p = {3.0, 0.0};
  state.v = {2.0, 0.0};
  const Vec2 cmd = command(state, straight_proj(0.0), prof, params, 5.0);
  REQUIRE(cmd.y == 0.0);
  REQUIRE(cmd.x == Approx(2.0 * 1.2));  // pace * v_star, unsaturated
}

TEST_CASE("full command decomposes exactly when unsaturated") {
  const IlcParams params;
  const ArclengthGrid grid{10.0, 11};
  const SpeedProfile prof = SpeedProfile::uniform(grid, 0.8);
  DroneState state;
  state.v = {1.5, 0.3};
  const Projection proj = straight_proj(0.7);
  const double pace = floored_pace(state.v, proj.tangent);
  const Vec2 cmd = command(state, proj, prof, params, 50.0);
  const Vec2 expected = pace_command(proj, prof, pace) + path_convergence(proj, pace, params);
  REQUIRE(distance(cmd, expected) < 1e-12);
  // Normal component is exactly the convergence term.
  REQUIRE(cmd.y == Approx(path_convergence(proj, pace, params).y));
}

TEST_CASE("full command saturates radially at v_max") {
  const IlcParams params;
  const ArclengthGrid grid{10.0, 11};
  const SpeedProfile prof = SpeedProfile::uniform(grid, 40.0);
  DroneState state;
  state.v = {4.0, 0.0};
  const Vec2 cmd = command(state, straight_proj(1.5), prof, params, 5.0);
  REQUIRE(cmd.norm() == Approx(5.0));
  // Direction preserved: same heading as the unsaturated sum.
  const double pace = floored_pace(state.v, straight_proj(1.5).tangent);
  const Vec2 raw = pace_command(straight_proj(1.5), prof, pace) +
                   path_convergence(straight_proj(1.5), pace, params);
  REQUIRE(std::abs(cross(normalized(raw), normalized(cmd))) < 1e-12);
}

TEST_CASE("error profile slope: smoothed central differences") {
  const ArclengthGrid grid{1.0, 11};  // spacing 0.1
  std::vector<double> ramp(11);
  for (int i = 0; i < 11; ++i) ramp[static_cast<size_t>(i)] = 0.1 * i;  // |e| = l
  const ErrorProfile ep = ErrorProfile::from_samples(grid, ramp);
  REQUIRE(ep.e_norm[5] == Approx(0.5));
  // A linear ramp survives smoothing in the deep interior; slope = 1 there.
  for (int i = 3; i <= 7; ++i) REQUIRE(ep.slope[static_cast<size_t>(i)] == Approx(1.0));
  // Window clamping flattens the smoothed values near the ends: smooth[1] is
  // the 4-sample average 0.15, so the central difference at i = 2 drops.
  REQUIRE(ep.slope[2] == Approx(0.75));
  REQUIRE(ep.slope[8] == Approx(0.75));
  REQUIRE(ep.slope[0] == Approx(0.5));
  REQUIRE(ep.slope[10] == Approx(0.5));

  REQUIRE_THROWS_AS(ErrorProfile::from_samples(grid, std::vector<double>(7, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("moving average actually smooths a spike") {
  const ArclengthGrid grid{1.0, 11};
  std::vector<double> spike(11, 0.0);
  spike[5] = 1.0;
  const ErrorProfile ep = ErrorProfile::from_samples(grid, spike);
  // e_norm keeps the raw samples; slope is computed from the smoothed series,
  // so the 5-wide average spreads the spike across neighbors.
  REQUIRE(ep.e_norm[5] == 1.0);
  REQUIRE(ep.slope[2] == Approx((0.2 - 0.0) / 0.2));  // smooth[3]=0.2, smooth[1]=0
  REQUIRE(ep.slope[5] == Approx(0.0).margin(1e-12));  // symmetric around the spike
}

TEST_CASE("zero-error lap raises the whole profile by chi_alpha * x_th") {
  const IlcParams params;
  const ArclengthGrid grid{10.0, 201};
  const SpeedProfile prof = SpeedProfile::uniform(grid, 1.0);
  const ErrorProfile ep =
      ErrorProfile::from_samples(grid, std::vector<double>(201, 0.0));
  const SpeedProfile next = update_profile(prof, ep, params);
  REQUIRE(next.iteration == 1);
  for (double v : next.v_star) REQUIRE(v == Approx(1.2));
}

TEST_CASE("update fixed point at the threshold error") {
  IlcParams params;
  const ArclengthGrid grid{10.0, 201};
  const SpeedProfile prof = SpeedProfile::uniform(grid, 3.0);
  // Constant error x_th / k_p makes the argument exactly x_th -> chi = 0.
  const double e = params.x_th / params.k_p;
  const ErrorProfile ep = ErrorProfile::from_samples(grid, std::vector<double>(201, e));
  const SpeedProfile next = update_profile(prof, ep, params);
  for (size_t i = 0; i < next.v_star.size(); ++i) REQUIRE(next.v_star[i] == Approx(3.0));
}

TEST_CASE("larger errors never raise the updated profile") {
  IlcParams params;
  const ArclengthGrid grid{5.0, 51};
  const SpeedProfile prof = SpeedProfile::uniform(grid, 10.0);
  std::vector<double> lo_v(51, 0.3);
  std::vector<double> hi_v(51, 0.9);
  const SpeedProfile lo = update_profile(prof, ErrorProfile::from_samples(grid, lo_v), params);
  const SpeedProfile hi = update_profile(prof, ErrorProfile::from_samples(grid, hi_v), params);
  for (size_t i = 0; i < lo.v_star.size(); ++i) REQUIRE(hi.v_star[i] <= lo.v_star[i]);
  // 0.9 is above threshold: beta branch cuts v* hard.
  REQUIRE(hi.v_star[25] == Approx(10.0 - 2.0 * 0.4));
  REQUIRE(lo.v_star[25] == Approx(10.0 + 0.4 * 0.2));
}

TEST_CASE("update clamps to [0, v_star_cap]") {
  IlcParams params;
  params.v_star_cap = 1.25;
  const ArclengthGrid grid{10.0, 201};
  const ErrorProfile zero =
      ErrorProfile::from_samples(grid, std::vector<double>(201, 0.0));
  SpeedProfile prof = SpeedProfile::uniform(grid, 1.2);
  prof = update_profile(prof, zero, params);  // +0.2 would pass the cap
  for (double v : prof.v_star) REQUIRE(v == Approx(1.25));

  const ErrorProfile huge =
      ErrorProfile::from_samples(grid, std::vector<double>(201, 3.0));
  SpeedProfile low = SpeedProfile::uniform(grid, 0.5);
  low = update_profile(low, huge, params);  // chi(3.0) = 5.0 would go negative
  for (double v : low.v_star) REQUIRE(v == 0.0);
}

TEST_CASE("update rejects mismatched grids") {
  const IlcParams params;
  const SpeedProfile prof = SpeedProfile::uniform(ArclengthGrid{10.0, 201}, 1.0);
  const ErrorProfile ep =
      ErrorProfile::from_samples(ArclengthGrid{10.0, 101}, std::vector<double>(101, 0.0));
  REQUIRE_THROWS_AS(update_profile(prof, ep, params), std::invalid_argument);
}

TEST_CASE("speed profile interpolates linearly") {
  const ArclengthGrid grid{2.0, 3};  // samples at 0, 1, 2
  SpeedProfile prof{grid, {1.0, 3.0, 2.0}, 0};
  REQUIRE(prof(0.5) == Approx(2.0));
  REQUIRE(prof(1.5) == Approx(2.5));
  REQUIRE(prof(-1.0) == Approx(1.0));
  REQUIRE(prof(9.0) == Approx(2.0));
}

TEST_CASE("parameter validation rejects non-positive gains") {
  IlcParams p;
  REQUIRE_NOTHROW(p.validate());
  p.k_p = 0.0;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  p = IlcParams{};
  p.k_d = -0.1;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  p = IlcParams{};
  p.chi_beta = 0.1;  // below chi_alpha
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  p = IlcParams{};
  p.v_star_init = 60.0;  // above the cap
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  p = IlcParams{};
  p.v_star_init = 0.0;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  p = IlcParams{};
  p.k3 = 0.0;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  p = IlcParams{};
  p.x_th = 0.0;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
}
