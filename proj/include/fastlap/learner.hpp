#pragma once
// Lap-level learning loop: fly a lap with the current speed profile, update
// the profile from the recorded error (finished laps) or shrink it around the
// failure point (aborted laps), repeat until the lap time settles.
//
// Convergence: the last `convergence_window` laps all finished and every
// successive lap-time difference among them is below `convergence_tol`.
// Failures reset the streak. A failure on the very first lap is treated as a
// configuration error -- the initial profile is already too hot to fly.

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fastlap/controller.hpp"
#include "fastlap/plant.hpp"
#include "fastlap/sim.hpp"
#include "fastlap/tube.hpp"

namespace fastlap {

struct LearningConfig {
  int max_iterations{20};
  double convergence_tol{0.05};   // seconds
  int convergence_window{3};      // consecutive finished laps
  double failure_shrink{0.5};     // multiplier applied inside the failure halo
  double failure_halo{3.0};       // meters either side of the failure point
  RunLimits limits{};
  double grid_spacing{kDefaultGridSpacing};

  void validate() const {
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(convergence_tol >= 0.0)) throw std::invalid_argument("convergence_tol must be >= 0");
    if (convergence_window < 2) throw std::invalid_argument("convergence_window must be >= 2");
    if (!(failure_shrink > 0.0) || failure_shrink >= 1.0) {
      throw std::invalid_argument("failure_shrink must lie in (0, 1)");
    }
    if (!(failure_halo >= 0.0)) throw std::invalid_argument("failure_halo must be >= 0");
    limits.validate();
  }
};

// First lap failed: the run cannot produce error data to learn from.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IterationRecord {
  int iteration{0};
  LapOutcome outcome{LapOutcome::kTimeout};
  double lap_time{std::numeric_limits<double>::quiet_NaN()};  // finished laps only
  double max_e_norm{0.0};
  double fail_l{std::numeric_limits<double>::quiet_NaN()};    // failed laps only
  SpeedProfile profile;         // profile flown this iteration
  std::vector<double> e_norm;   // per-station |e_p|; NaN past the failure point
};

struct LearningRun {
  ArclengthGrid grid;
  std::vector<IterationRecord> records;
  bool converged{false};
  int converged_at{-1};
  double best_lap_time{std::numeric_limits<double>::quiet_NaN()};
  int best_iteration{-1};
  LapTrace best_trace;          // trace of the best finished lap
  LapTrace last_trace;          // trace of the final iteration, any outcome
  SpeedProfile final_profile;   // profile state after the last iteration
  double total_sim_time{0.0};   // summed simulated lap durations, s
  double wall_seconds{0.0};     // learning-loop wall clock, s
};

// Lap time of the last finished lap: the time the settled profile actually
// flies. The minimum over all laps can dip below it on a lucky transient, so
// comparisons against baselines use this statistic.
inline double converged_lap_time(const LearningRun& run) {
  for (auto it = run.records.rbegin(); it != run.records.rend(); ++it) {
    if (it->outcome == LapOutcome::kFinished) return it->lap_time;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// Multiplicative shrink of v* within the halo of the failure arclength;
// samples outside the halo keep their previous values. Closed tracks measure
// the halo in wrapped arclength distance.
inline SpeedProfile handle_failure(const SpeedProfile& profile, double fail_l,
                                   const LearningConfig& cfg, bool closed_track = false) {
  SpeedProfile out = profile;
  out.iteration = profile.iteration + 1;
  const double L = profile.grid.length;
  for (int i = 0; i < profile.grid.count; ++i) {
    const double l = profile.grid.l_at(i);
    double d = std::abs(l - fail_l);
    if (closed_track) d = std::min(d, L - d);
    if (d <= cfg.failure_halo) out.v_star[static_cast<size_t>(i)] *= cfg.failure_shrink;
  }
  return out;
}

inline LearningRun run_learning(
    const VirtualTube& tube, const PlantParams& plant, const IlcParams& ilc,
    const LearningConfig& cfg,
    const std::function<void(const IterationRecord&)>& on_iteration = nullptr) {
  plant.validate();
  ilc.validate();
  cfg.validate();

  const auto wall_start = std::chrono::steady_clock::now();

  LearningRun run;
  run.grid = ArclengthGrid::with_spacing(tube.length(), cfg.grid_spacing);
  SpeedProfile profile = SpeedProfile::uniform(run.grid, ilc.v_star_init);

  int streak = 0;
  double prev_time = std::numeric_limits<double>::quiet_NaN();

  for (int k = 0; k < cfg.max_iterations; ++k) {
    const ControllerFn fn = [&](const DroneState& s, const Projection& proj) {
      return command(s, proj, profile, ilc, plant.v_max);
    };
    LapTrace trace = run_lap(tube, fn, plant, cfg.limits, cfg.grid_spacing);
    run.total_sim_time += trace.elapsed;
    const bool finished = trace.finished();

    IterationRecord rec;
    rec.iteration = k;
    rec.outcome = trace.outcome;
    rec.profile = profile;
    rec.e_norm.assign(static_cast<size_t>(run.grid.count),
                      std::numeric_limits<double>::quiet_NaN());
    for (size_t i = 0; i < trace.samples.size() && i < rec.e_norm.size(); ++i) {
      rec.e_norm[i] = trace.samples[i].e_norm;
      rec.max_e_norm = std::max(rec.max_e_norm, trace.samples[i].e_norm);
    }

    if (finished) {
      rec.lap_time = trace.lap_time;
      if (std::isnan(run.best_lap_time) || trace.lap_time < run.best_lap_time) {
        run.best_lap_time = trace.lap_time;
        run.best_iteration = k;
        run.best_trace = trace;
      }
      streak = (streak > 0 && std::abs(trace.lap_time - prev_time) < cfg.convergence_tol)
                   ? streak + 1
                   : 1;
      prev_time = trace.lap_time;
    } else {
      rec.fail_l = trace.fail_l;
      streak = 0;
      prev_time = std::numeric_limits<double>::quiet_NaN();
    }
    run.last_trace = std::move(trace);

    run.records.push_back(rec);
    if (on_iteration) on_iteration(run.records.back());

    if (!finished && k == 0) {
      throw ConfigurationError(
          std::string("first lap failed (") + outcome_name(rec.outcome) +
          "); lower v_star_init or widen the tube");
    }

    if (streak >= cfg.convergence_window) {
      run.converged = true;
      run.converged_at = k;
      break;
    }

    if (finished) {
      const ErrorProfile errors = ErrorProfile::from_samples(run.grid, rec.e_norm);
      profile = update_profile(profile, errors, ilc);
    } else {
      profile = handle_failure(profile, rec.fail_l, cfg, tube.closed());
    }
  }

  run.final_profile = profile;
  run.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return run;
}

}  // namespace fastlap
