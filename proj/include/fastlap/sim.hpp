#pragma once
// Closed-loop lap simulation.
//
// run_lap starts the plant on the centerline at l = 0 with a tangential
// initial speed, queries the controller once per control period, integrates
// the exact plant step, and records the trace on a uniform arclength grid by
// linearly interpolating each period's states across the grid stations it
// crossed. Lap time is interpolated at the crossing of l = L (closed tracks:
// unwrapped progress reaching L; open tracks: crossing of the end plane).

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fastlap/grid.hpp"
#include "fastlap/plant.hpp"
#include "fastlap/tube.hpp"
#include "fastlap/vec2.hpp"

namespace fastlap {

enum class LapOutcome { kFinished, kTubeExit, kTimeout, kProjectionLost };

inline const char* outcome_name(LapOutcome o) {
  switch (o) {
    case LapOutcome::kFinished: return "finished";
    case LapOutcome::kTubeExit: return "tube_exit";
    case LapOutcome::kTimeout: return "timeout";
    case LapOutcome::kProjectionLost: return "projection_lost";
  }
  return "unknown";
}

struct LapSample {
  double l{0.0};
  double t{0.0};
  Vec2 p;
  Vec2 v;
  double pace{0.0};    // floored tangential speed at the station
  double e_norm{0.0};  // |e_p| at the station
  Vec2 cmd;            // saturated command applied during the crossing period
};

struct LapTrace {
  ArclengthGrid grid;
  std::vector<LapSample> samples;  // one per grid station reached, in order
  LapOutcome outcome{LapOutcome::kTimeout};
  double fail_l{0.0};    // exit/loss arclength; furthest progress on timeout
  double lap_time{0.0};  // valid when finished
  double elapsed{0.0};   // simulated seconds spent, any outcome

  bool finished() const { return outcome == LapOutcome::kFinished; }
};

struct RunLimits {
  double t_max{120.0};  // simulated-time budget per lap, s
  double v_init{2.0};   // tangential speed at the start line, m/s

  void validate() const {
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (!(v_init > 0.0)) throw std::invalid_argument("v_init must be positive");
  }
};

using ControllerFn = std::function<Vec2(const DroneState&, const Projection&)>;

inline LapTrace run_lap(const VirtualTube& tube, const ControllerFn& controller,
                        const PlantParams& plant, const RunLimits& limits,
                        double grid_spacing = kDefaultGridSpacing) {
  plant.validate();
  limits.validate();

  const double L = tube.length();
  LapTrace trace;
  trace.grid = ArclengthGrid::with_spacing(L, grid_spacing);
  trace.samples.reserve(static_cast<size_t>(trace.grid.count));

  const TubeFrame start = tube.frame_at(0.0);
  DroneState state{start.point, start.tangent * limits.v_init, 0.0};
  Projection proj = *tube.project(state.p, 0.0);

  // End-plane data for open-track finish interpolation.
  const TubeFrame finish = tube.frame_at(L);

  double s = 0.0;  // unwrapped progress
  int next_idx = 1;
  bool recorded_start = false;

  for (;;) {
    const Vec2 cmd = saturate(controller(state, proj), plant.v_max).command;
    if (!recorded_start) {
      trace.samples.push_back({0.0, 0.0, state.p, state.v,
                               floored_pace(state.v, proj.tangent), proj.e_p.norm(), cmd});
      recorded_start = true;
    }

    const DroneState next = step(state, cmd, plant);
    const auto nproj_opt = tube.project(next.p, proj.l);
    if (!nproj_opt) {
      trace.outcome = LapOutcome::kProjectionLost;
      trace.fail_l = tube.curve().canonical_l(std::max(s, 0.0));
      trace.elapsed = next.t;
      return trace;
    }
    const Projection nproj = *nproj_opt;

    double ds;
    if (tube.closed()) {
      ds = nproj.l - (s - L * std::floor(s / L));  // wrapped progress delta
      if (ds > L / 2.0) ds -= L;
      if (ds < -L / 2.0) ds += L;
    } else {
      ds = nproj.l - s;
    }
    const double s_next = s + ds;

    // Finish detection before recording, so the last station uses the same
    // interpolation fraction as the lap time.
    bool finished = false;
    double frac_T = 1.0;
    if (tube.closed()) {
      if (s_next >= L) {
        finished = true;
        frac_T = (L - s) / (s_next - s);
      }
    } else if (nproj.l >= L - 1e-12) {
      const double d_now = dot(next.p - finish.point, finish.tangent);
      if (d_now >= 0.0) {
        const double d_prev = dot(state.p - finish.point, finish.tangent);
        finished = true;
        frac_T = d_prev < 0.0 ? d_prev / (d_prev - d_now) : 1.0;
      }
    }

    const double reach = finished ? L : s_next;
    while (next_idx < trace.grid.count && trace.grid.l_at(next_idx) <= reach) {
      const double lg = trace.grid.l_at(next_idx);
      double frac;
      if (finished && next_idx == trace.grid.count - 1) {
        frac = frac_T;
      } else {
        frac = s_next > s ? std::clamp((lg - s) / (s_next - s), 0.0, 1.0) : 1.0;
      }
      const Vec2 pg = lerp(state.p, next.p, frac);
      const Vec2 vg = lerp(state.v, next.v, frac);
      const auto gproj = tube.project(pg, lg);
      const Vec2 tangent = gproj ? gproj->tangent : tube.frame_at(lg).tangent;
      const double e = gproj ? gproj->e_p.norm() : distance(tube.frame_at(lg).point, pg);
      trace.samples.push_back({lg, state.t + frac * plant.dt, pg, vg,
                               floored_pace(vg, tangent), e, cmd});
      ++next_idx;
    }

    if (finished) {
      trace.outcome = LapOutcome::kFinished;
      trace.lap_time = state.t + frac_T * plant.dt;
      trace.elapsed = trace.lap_time;
      return trace;
    }

    if (nproj.e_p.norm() > nproj.radius) {
      trace.outcome = LapOutcome::kTubeExit;
      trace.fail_l = nproj.l;
      trace.elapsed = next.t;
      return trace;
    }

    if (next.t >= limits.t_max) {
      trace.outcome = LapOutcome::kTimeout;
      trace.fail_l = tube.curve().canonical_l(std::clamp(s_next, 0.0, L));
      trace.elapsed = next.t;
      return trace;
    }

    state = next;
    proj = nproj;
    s = s_next;
  }
}

}  // namespace fastlap
