#pragma once
// Virtual tube: a generator curve plus an arclength-dependent corridor radius.
//
// Tubes are built from waypoint lists: straight lines between waypoints with
// tangent circular fillets at turning corners. A fillet of radius R cannot
// pass through the corner point itself (it cuts the corner by R*(sec(t/2)-1)),
// so the tube records the realized passage points -- the fillet apex at each
// turning corner, the original point elsewhere -- and those are guaranteed to
// lie on the curve.
//
// Projection is windowed: given the previous arclength as a hint, only the
// curve within +-kProjectionWindow of it is searched, which keeps the foot
// point locally unique on closed tracks. Points farther than twice the
// maximum tube radius from the curve are reported as ambiguous (no result).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fastlap/geometry.hpp"
#include "fastlap/vec2.hpp"

namespace fastlap {

// Half width of the arclength window used by hinted projection, meters.
inline constexpr double kProjectionWindow = 5.0;

// Piecewise-linear tube radius r_t(l); a single breakpoint means constant.
// Evaluation clamps outside the breakpoint range.
class RadiusProfile {
 public:
  explicit RadiusProfile(double constant_radius)
      : points_{{0.0, constant_radius}} {
    validate();
  }

  explicit RadiusProfile(std::vector<std::pair<double, double>> breakpoints)
      : points_(std::move(breakpoints)) {
    validate();
  }

  double operator()(double l) const {
    if (points_.size() == 1 || l <= points_.front().first) return points_.front().second;
    if (l >= points_.back().first) return points_.back().second;
    auto it = std::upper_bound(points_.begin(), points_.end(), l,
                               [](double v, const auto& bp) { return v < bp.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (l - lo.first) / (hi.first - lo.first);
    return lo.second + (hi.second - lo.second) * t;
  }

  double max_radius() const {
    double m = 0.0;
    for (const auto& bp : points_) m = std::max(m, bp.second);
    return m;
  }

  double min_radius() const {
    double m = points_.front().second;
    for (const auto& bp : points_) m = std::min(m, bp.second);
    return m;
  }

  const std::vector<std::pair<double, double>>& breakpoints() const { return points_; }

 private:
  void validate() const {
    if (points_.empty()) throw std::invalid_argument("radius profile needs at least one breakpoint");
    for (size_t i = 0; i < points_.size(); ++i) {
      if (!(points_[i].second > 0.0)) {
        throw std::invalid_argument("tube radius must be positive at breakpoint " + std::to_string(i));
      }
      if (i > 0 && !(points_[i].first > points_[i - 1].first)) {
        throw std::invalid_argument("radius breakpoints must have strictly increasing arclength");
      }
    }
  }

  std::vector<std::pair<double, double>> points_;
};

// Result of projecting a point onto the tube's curve.
struct Projection {
  double l{0.0};          // arclength of the foot point, in [0, L)
  Vec2 m;                 // foot point on the curve
  Vec2 e_p;               // m - p, the position error
  Vec2 tangent;           // unit tangent at l
  double curvature{0.0};  // unsigned curvature at l
  double radius{0.0};     // tube radius r_t(l)
};

// Curve frame plus tube radius at one station.
struct TubeFrame {
  Vec2 point;
  Vec2 tangent;
  double curvature{0.0};
  double radius{0.0};
};

// Raised when a waypoint list cannot be turned into a tube.
class TubeBuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VirtualTube {
 public:
  VirtualTube(GeneratorCurve curve, RadiusProfile radius, std::vector<Vec2> waypoints)
      : curve_(std::move(curve)), radius_(std::move(radius)), waypoints_(std::move(waypoints)) {
    max_radius_ = radius_.max_radius();
    for (size_t i = 0; i < waypoints_.size(); ++i) {
      const auto proj = project(waypoints_[i]);
      if (!proj || proj->e_p.norm() > 1e-6) {
        throw std::invalid_argument("waypoint " + std::to_string(i) + " does not lie on the curve");
      }
    }
  }

  // Build from waypoints: lines joined by tangent fillets of corner_radius at
  // every turning corner (interior corners on open tracks, all corners on
  // closed ones). Overlapping fillets raise TubeBuildError naming the corner.
  static VirtualTube build(const std::vector<Vec2>& waypoints, double corner_radius,
                           RadiusProfile radius, bool closed);

  const GeneratorCurve& curve() const { return curve_; }
  const RadiusProfile& radius_profile() const { return radius_; }
  const std::vector<Vec2>& waypoints() const { return waypoints_; }
  double length() const { return curve_.length(); }
  bool closed() const { return curve_.closed(); }
  double max_radius() const { return max_radius_; }

  TubeFrame frame_at(double l) const {
    const CurveFrame f = curve_.frame_at(l);
    return {f.point, f.tangent, f.curvature, radius_(curve_.canonical_l(l))};
  }

  // Windowed projection around hint_l; pass no hint for a whole-curve search.
  // Returns nothing when the point is farther than 2 * max r_t from the curve
  // (the locally-unique region ends there).
  std::optional<Projection> project(const Vec2& p,
                                    std::optional<double> hint_l = std::nullopt) const {
    double lo = 0.0;
    double hi = curve_.length();
    double hint = 0.0;
    if (hint_l) {
      hint = curve_.canonical_l(*hint_l);
      lo = hint - kProjectionWindow;
      hi = hint + kProjectionWindow;
    }

    double best_d = std::numeric_limits<double>::infinity();
    double best_l = 0.0;
    Vec2 best_m;
    const auto& segs = curve_.segments();
    for (size_t i = 0; i < segs.size(); ++i) {
      const double s0 = curve_.segment_start(i);
      const double s1 = s0 + segs[i].length();
      if (hint_l && !overlaps_window(s0, s1, lo, hi)) continue;
      const auto local = segs[i].project(p);
      double cand_l = s0 + local.s;
      // Better distance wins; on exact ties the later segment owns the join.
      if (local.dist < best_d - 1e-15 ||
          (std::abs(local.dist - best_d) <= 1e-15 && cand_l > best_l)) {
        best_d = local.dist;
        best_l = cand_l;
        best_m = local.point;
      }
    }
    if (!std::isfinite(best_d) || best_d > 2.0 * max_radius_) return std::nullopt;

    Projection out;
    out.l = curve_.closed() ? curve_.canonical_l(best_l) : std::clamp(best_l, 0.0, curve_.length());
    const CurveFrame f = curve_.frame_at(out.l);
    out.m = best_m;
    out.e_p = best_m - p;
    out.tangent = f.tangent;
    out.curvature = f.curvature;
    out.radius = radius_(out.l);
    return out;
  }

  bool contains(const Projection& proj) const { return proj.e_p.norm() <= proj.radius; }

  // Membership via projection; boundary points are inside. Throws when the
  // projection is ambiguous.
  bool contains(const Vec2& p, std::optional<double> hint_l = std::nullopt) const {
    const auto proj = project(p, hint_l);
    if (!proj) throw std::runtime_error("projection ambiguous: point too far from the curve");
    return contains(*proj);
  }

 private:
  // Does [s0, s1] intersect the (possibly wrapping) window [lo, hi]?
  bool overlaps_window(double s0, double s1, double lo, double hi) const {
    const double L = curve_.length();
    if (!curve_.closed()) return s1 >= std::max(lo, 0.0) && s0 <= std::min(hi, L);
    if (hi - lo >= L) return true;
    double wlo = std::fmod(lo, L);
    if (wlo < 0.0) wlo += L;
    double whi = std::fmod(hi, L);
    if (whi < 0.0) whi += L;
    if (wlo <= whi) return s1 >= wlo && s0 <= whi;
    return s0 <= whi || s1 >= wlo;  // window wraps the seam
  }

  GeneratorCurve curve_;
  RadiusProfile radius_;
  std::vector<Vec2> waypoints_;
  double max_radius_{0.0};
};

namespace detail {

struct CornerPlan {
  double turn{0.0};    // signed turn angle, 0 for pass-through corners
  double trim{0.0};    // tangent-point distance consumed on each adjacent leg
  Vec2 center;         // fillet center (turning corners only)
  double angle0{0.0};  // fillet start angle
  Vec2 apex;           // realized passage point
};

inline CornerPlan plan_corner(const Vec2& prev, const Vec2& at, const Vec2& next,
                              double corner_radius, size_t index) {
  CornerPlan c;
  const Vec2 u = normalized(at - prev);
  const Vec2 w = normalized(next - at);
  c.turn = std::atan2(cross(u, w), dot(u, w));
  c.apex = at;
  if (std::abs(c.turn) < 1e-12) {
    c.turn = 0.0;
    return c;  // collinear: the line passes straight through the waypoint
  }
  if (std::numbers::pi - std::abs(c.turn) < 1e-9) {
    throw TubeBuildError("waypoint " + std::to_string(index) +
                         " reverses direction; cannot fillet a 180 degree turn");
  }
  if (!(corner_radius > 0.0)) {
    throw std::invalid_argument("corner radius must be positive when corners turn");
  }
  c.trim = corner_radius * std::tan(std::abs(c.turn) / 2.0);
  const double side = c.turn > 0.0 ? 1.0 : -1.0;
  const Vec2 entry = at - u * c.trim;
  c.center = entry + perp(u) * (side * corner_radius);
  const Vec2 radial = entry - c.center;
  c.angle0 = std::atan2(radial.y, radial.x);
  c.apex = c.center + normalized(at - c.center) * corner_radius;
  return c;
}

}  // namespace detail

inline VirtualTube VirtualTube::build(const std::vector<Vec2>& waypoints, double corner_radius,
                                      RadiusProfile radius, bool closed) {
  std::vector<Vec2> pts = waypoints;
  if (closed && pts.size() >= 2 && distance(pts.front(), pts.back()) < 1e-9) pts.pop_back();
  if (pts.size() < 2 || (closed && pts.size() < 3)) {
    throw std::invalid_argument("need at least 2 waypoints (3 for a closed track)");
  }
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (distance(pts[i], pts[i + 1]) < 1e-9) {
      throw std::invalid_argument("waypoints " + std::to_string(i) + " and " +
                                  std::to_string(i + 1) + " coincide");
    }
  }
  const size_t n = pts.size();

  // Plan fillets. Corner i sits at pts[i]; open tracks keep the endpoints as
  // plain curve endpoints (turn = 0, trim = 0).
  std::vector<detail::CornerPlan> corners(n);
  const auto cyclic = [&](size_t i) { return pts[(i + n) % n]; };
  for (size_t i = 0; i < n; ++i) {
    const bool interior = closed || (i > 0 && i + 1 < n);
    if (!interior) {
      corners[i].apex = pts[i];
      continue;
    }
    corners[i] = detail::plan_corner(cyclic(i + n - 1), pts[i], cyclic(i + 1), corner_radius, i);
  }

  // Fillets on both ends of a leg must fit inside it.
  const size_t leg_count = closed ? n : n - 1;
  for (size_t i = 0; i < leg_count; ++i) {
    const size_t j = (i + 1) % n;
    const double leg = distance(pts[i], cyclic(i + 1));
    if (corners[i].trim + corners[j].trim > leg + 1e-9) {
      throw TubeBuildError("fillets at waypoints " + std::to_string(i) + " and " +
                           std::to_string(j) + " overlap on the leg between them");
    }
  }

  const auto fillet_arc = [&](const detail::CornerPlan& c, double from_frac, double to_frac) {
    const double span = c.turn * (to_frac - from_frac);
    return Segment::arc(c.center, corner_radius, c.angle0 + c.turn * from_frac, span);
  };
  const auto maybe_line = [](std::vector<Segment>& out, const Vec2& a, const Vec2& b) {
    if (distance(a, b) > 1e-9) out.push_back(Segment::line(a, b));
  };
  const auto corner_entry = [&](size_t i) {
    return corners[i].turn == 0.0 ? pts[i]
                                  : pts[i] - normalized(pts[i] - cyclic(i + n - 1)) * corners[i].trim;
  };
  const auto corner_exit = [&](size_t i) {
    return corners[i].turn == 0.0 ? pts[i]
                                  : pts[i] + normalized(cyclic(i + 1) - pts[i]) * corners[i].trim;
  };

  std::vector<Segment> segs;
  std::vector<Vec2> realized;
  realized.reserve(n);

  if (!closed) {
    Vec2 cursor = pts[0];
    realized.push_back(pts[0]);
    for (size_t i = 1; i + 1 < n; ++i) {
      maybe_line(segs, cursor, corner_entry(i));
      if (corners[i].turn != 0.0) segs.push_back(fillet_arc(corners[i], 0.0, 1.0));
      cursor = corner_exit(i);
      realized.push_back(corners[i].apex);
    }
    maybe_line(segs, cursor, pts[n - 1]);
    realized.push_back(pts[n - 1]);
    return VirtualTube(GeneratorCurve(std::move(segs), false), std::move(radius),
                       std::move(realized));
  }

  // Closed: start at corner 0's apex, splitting its fillet so l = 0 and l = L
  // share one frame. A collinear corner 0 starts at the waypoint itself.
  const bool split0 = corners[0].turn != 0.0;
  Vec2 cursor = split0 ? corners[0].apex : pts[0];
  if (split0) segs.push_back(fillet_arc(corners[0], 0.5, 1.0));
  if (split0) cursor = corner_exit(0);
  realized.push_back(corners[0].apex);
  for (size_t k = 1; k < n; ++k) {
    maybe_line(segs, cursor, corner_entry(k));
    if (corners[k].turn != 0.0) segs.push_back(fillet_arc(corners[k], 0.0, 1.0));
    cursor = corner_exit(k);
    realized.push_back(corners[k].apex);
  }
  maybe_line(segs, cursor, split0 ? corner_entry(0) : pts[0]);
  if (split0) segs.push_back(fillet_arc(corners[0], 0.0, 0.5));
  return VirtualTube(GeneratorCurve(std::move(segs), true), std::move(radius),
                     std::move(realized));
}

}  // namespace fastlap
