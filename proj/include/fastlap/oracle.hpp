#pragma once
// Time-optimal baselines the learned controller is measured against.
//
// dp_lap_time: dynamic programming over (arclength, speed) on the tube
// centerline. The oracle is restricted to the centerline path; lateral
// freedom inside the tube is absorbed into the cornering speed cap below and
// into a small inside-line length credit on curved cells (corner_cut).
// Two plant-derived constraints bound each transition, and both are held
// fixed for reproducibility:
//
//  * Reachability. Between stations dl apart, speed may rise at most to the
//    exact acceleration envelope of the lag plant (command pinned at v_max
//    straight ahead: dv/dt = tau*(v_max - v) integrated over the distance
//    dl), and may fall at most to the exact braking envelope (command
//    reversed: dv/dt = -tau*(v + v_max); a stop inside dl reaches the speed
//    floor). Distance-domain envelopes compose exactly across step splitting,
//    so refining dl does not change what the oracle's plant can do. Braking
//    with a reversed command is stronger than anything the learned controller
//    does -- it never commands backwards -- so the oracle is never slower to
//    shed speed.
//
//  * Cornering cap. On curvature K a steady circular orbit needs centripetal
//    acceleration K*v^2, which the lag plant produces from the normal
//    component of its command: a_n = tau * c_n with |c| <= v_max. Splitting a
//    fully saturated command between holding pace (c_t = v) and turning gives
//    v^2 + (K_eff * v^2 / tau)^2 = v_max^2, whose positive root is the cap.
//    K_eff = 1 / (1/K + corridor_fraction * r_t) relaxes the centerline
//    curvature by a fixed fraction of the tube radius: the oracle corners on
//    the radius a mid-corridor racing line would see. Each DP cell applies
//    the minimum cap over its arclength interval, so coarse grids are never
//    less constrained than fine ones.
//
// arc_lap_time / arc_optimal_time: closed-form steady lap time on a
// constant-curvature track of centerline length L and radius r when the
// controller equilibrates at lateral error e (= x_th/k_p for the learned
// law, = lambda for the time-optimal reference):
//
//   T(e) = L * sqrt(k'^2 + (r+e)^2) / (r * v_max)
//
// which recovers T -> L/v_max both as r -> infinity and as (k', e) -> 0, and
// satisfies T(e) >= T(lambda) exactly when e >= lambda.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fastlap/plant.hpp"
#include "fastlap/tube.hpp"

namespace fastlap {

struct DpConfig {
  double dl{0.1};                 // arclength step, m
  int speed_levels{100};          // uniform speed grid size, >= 50
  double corridor_fraction{0.5};  // fraction of r_t(l) added to the cornering radius
  double corner_cut{0.1};         // inside-line depth credited on curved cells, m
  double v_floor{kPaceFloor};     // slowest representable speed, m/s
  double v_init{2.0};             // start-line speed, m/s

  void validate() const {
    if (!(dl > 0.0)) throw std::invalid_argument("dp dl must be positive");
    if (speed_levels < 50) throw std::invalid_argument("dp needs at least 50 speed levels");
    if (!(corridor_fraction >= 0.0)) throw std::invalid_argument("corridor_fraction must be >= 0");
    if (!(corner_cut >= 0.0)) throw std::invalid_argument("corner_cut must be >= 0");
    if (!(v_floor > 0.0)) throw std::invalid_argument("dp v_floor must be positive");
    if (!(v_init > 0.0)) throw std::invalid_argument("dp v_init must be positive");
  }
};

struct DpResult {
  bool feasible{false};
  double lap_time{std::numeric_limits<double>::quiet_NaN()};
  double infeasible_l{std::numeric_limits<double>::quiet_NaN()};  // first stalled station
};

// Steady cornering speed cap; v_max on straights.
inline double dp_speed_cap(double curvature, double tube_radius, double tau, double v_max,
                           double corridor_fraction) {
  if (curvature <= 0.0) return v_max;
  const double k_eff = 1.0 / (1.0 / curvature + corridor_fraction * tube_radius);
  const double a = (k_eff / tau) * (k_eff / tau);
  // a*v^4 + v^2 - v_max^2 = 0, positive root in v^2.
  const double v2 = (std::sqrt(1.0 + 4.0 * a * v_max * v_max) - 1.0) / (2.0 * a);
  return std::sqrt(v2);
}

namespace detail {

// Largest speed the lag plant can carry after accelerating flat-out for a
// distance dl starting at v (v < v_max). Solved by bisection on elapsed time;
// fixed iteration count keeps it deterministic.
inline double accel_envelope(double v, double dl, double tau, double v_max) {
  if (v_max - v < 1e-12) return v_max;
  const auto dist = [&](double t) {
    return v_max * t - (v_max - v) * (1.0 - std::exp(-tau * t)) / tau;
  };
  double lo = dl / v_max;  // dist(lo) <= dl
  double hi = dl / v;      // dist(hi) >= dl
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dist(mid) < dl ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return v_max - (v_max - v) * std::exp(-tau * t);
}

// Smallest speed after braking flat-out (reversed command) for a distance dl
// starting at v. Returns 0 when the plant can stop inside dl.
inline double brake_envelope(double v, double dl, double tau, double v_max) {
  const double t_stop = std::log((v + v_max) / v_max) / tau;
  const auto dist = [&](double t) {
    return (v + v_max) * (1.0 - std::exp(-tau * t)) / tau - v_max * t;
  };
  if (dist(t_stop) <= dl) return 0.0;
  double lo = 0.0;
  double hi = t_stop;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dist(mid) < dl ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return (v + v_max) * std::exp(-tau * t) - v_max;
}

}  // namespace detail

inline DpResult dp_lap_time(const VirtualTube& tube, const PlantParams& plant,
                            const DpConfig& cfg) {
  plant.validate();
  cfg.validate();

  const double L = tube.length();
  const int stages = std::max(1, static_cast<int>(std::ceil(L / cfg.dl - 1e-9)));
  const double dl = L / stages;
  const int n = cfg.speed_levels;
  const double v_lo = cfg.v_floor;
  const double dv = (plant.v_max - v_lo) / (n - 1);
  const auto level = [&](int j) { return v_lo + dv * j; };

  // Per-cell speed cap: minimum over the cell's arclength interval, taken
  // from the largest curvature and smallest tube radius inside it. Curved
  // cells are also shortened by corner_cut * |K|: a flyer holding a small
  // inside-line offset covers less ground than the centerline, and a purely
  // centerline-length oracle would otherwise sit above a well-converged lap.
  const auto& segs = tube.curve().segments();
  const auto& bps = tube.radius_profile().breakpoints();
  std::vector<double> cell_cap(static_cast<size_t>(stages));
  std::vector<double> cell_len(static_cast<size_t>(stages));
  for (int i = 0; i < stages; ++i) {
    const double a = i * dl;
    const double b = std::min(L, (i + 1) * dl);
    double k_max = 0.0;
    const size_t si0 = tube.curve().locate(a);
    for (size_t si = si0; si < segs.size(); ++si) {
      if (si != si0 && tube.curve().segment_start(si) >= b - 1e-12) break;
      if (segs[si].kind() == Segment::Kind::kArc) {
        k_max = std::max(k_max, 1.0 / segs[si].radius());
      }
    }
    double r_min = std::min(tube.radius_profile()(a), tube.radius_profile()(b));
    for (const auto& bp : bps) {
      if (bp.first > a && bp.first < b) r_min = std::min(r_min, bp.second);
    }
    cell_cap[static_cast<size_t>(i)] =
        dp_speed_cap(k_max, r_min, plant.tau, plant.v_max, cfg.corridor_fraction);
    const double k_mid = tube.frame_at(0.5 * (a + b)).curvature;
    cell_len[static_cast<size_t>(i)] = (b - a) * std::max(0.0, 1.0 - cfg.corner_cut * k_mid);
  }

  // Per-level reachability envelopes (dl is constant across stages).
  std::vector<double> reach_hi(static_cast<size_t>(n));
  std::vector<double> reach_lo(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    reach_hi[static_cast<size_t>(j)] = detail::accel_envelope(level(j), dl, plant.tau, plant.v_max);
    reach_lo[static_cast<size_t>(j)] =
        std::max(v_lo, detail::brake_envelope(level(j), dl, plant.tau, plant.v_max));
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(static_cast<size_t>(n), inf);
  std::vector<double> next(static_cast<size_t>(n), inf);

  // Start at the level nearest the start-line speed (respecting the first cap).
  {
    const double v0 = std::clamp(cfg.v_init, v_lo, std::min(plant.v_max, cell_cap[0]));
    const int j0 = std::clamp(static_cast<int>(std::lround((v0 - v_lo) / dv)), 0, n - 1);
    cost[static_cast<size_t>(j0)] = 0.0;
  }

  DpResult out;
  for (int i = 0; i < stages; ++i) {
    std::fill(next.begin(), next.end(), inf);
    const double cap = cell_cap[static_cast<size_t>(i)];
    const double len = cell_len[static_cast<size_t>(i)];
    bool any = false;
    for (int j = 0; j < n; ++j) {
      const double c = cost[static_cast<size_t>(j)];
      if (c == inf) continue;
      const double v = level(j);
      if (v > cap + 1e-12) continue;
      int m_lo = std::max(
          0, static_cast<int>(std::ceil((reach_lo[static_cast<size_t>(j)] - v_lo) / dv - 1e-9)));
      const int m_cap =
          static_cast<int>(std::floor((std::min(reach_hi[static_cast<size_t>(j)], cap) - v_lo) / dv + 1e-9));
      int m_hi = std::min(n - 1, m_cap);
      // One-level grace keeps the grid connected where the exact per-cell
      // speed gain falls below one level (near the asymptote the envelope
      // still moves, but by less than dv, and flooring would freeze the
      // chain). A single-level hop stays well inside what the lag plant can
      // do over one cell at every grid in use.
      if (j + 1 < n && reach_hi[static_cast<size_t>(j)] > v && level(j + 1) <= cap + 1e-12) {
        m_hi = std::max(m_hi, j + 1);
      }
      if (j > 0 && reach_lo[static_cast<size_t>(j)] < v) {
        m_lo = std::min(m_lo, j - 1);
      }
      for (int m = m_lo; m <= m_hi; ++m) {
        const double t = c + 2.0 * len / (v + level(m));
        if (t < next[static_cast<size_t>(m)]) {
          next[static_cast<size_t>(m)] = t;
          any = true;
        }
      }
    }
    if (!any) {
      out.infeasible_l = (i + 1) * dl;
      return out;
    }
    cost.swap(next);
  }

  double best = inf;
  for (int j = 0; j < n; ++j) best = std::min(best, cost[static_cast<size_t>(j)]);
  out.feasible = best < inf;
  out.lap_time = best;
  return out;
}

// Constant-curvature steady-state analysis case. lambda is the lateral error
// a time-optimal steady orbit would carry; the learned law settles at
// x_th / k_p, which must not undercut it.
struct ArcCase {
  double arc_length{10.0};  // centerline length L, m
  double radius{5.0};       // centerline radius r, m
  double k_prime{1.0};      // angular-speed error coefficient, m
  double x_th{0.5};
  double k_p{1.0};
  double v_max{5.0};
  double lambda{0.1};

  void validate() const {
    if (!(arc_length > 0.0) || !(radius > 0.0) || !(v_max > 0.0)) {
      throw std::invalid_argument("arc case needs positive L, r, v_max");
    }
    if (!(k_prime >= 0.0)) throw std::invalid_argument("k_prime must be >= 0");
    if (!(x_th > 0.0) || !(k_p > 0.0)) throw std::invalid_argument("x_th, k_p must be positive");
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    if (x_th / k_p < lambda) {
      throw std::invalid_argument("arc case requires x_th/k_p >= lambda");
    }
  }
};

namespace detail {
inline double arc_time_at_error(const ArcCase& c, double e) {
  const double re = c.radius + e;
  return c.arc_length * std::sqrt(c.k_prime * c.k_prime + re * re) / (c.radius * c.v_max);
}
}  // namespace detail

// Steady lap time of the learned law's equilibrium (error x_th/k_p).
inline double arc_lap_time(const ArcCase& c) {
  c.validate();
  return detail::arc_time_at_error(c, c.x_th / c.k_p);
}

// Steady lap time of the time-optimal reference orbit (error lambda).
inline double arc_optimal_time(const ArcCase& c) {
  c.validate();
  return detail::arc_time_at_error(c, c.lambda);
}

}  // namespace fastlap
