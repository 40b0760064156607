#pragma once
// Piecewise line/arc centerline with exact arclength, tangent and curvature.
//
// A Segment is either a straight line or a circular arc; a GeneratorCurve is a
// C1 chain of segments indexed by arclength. Curvature is reported unsigned
// (1/radius on arcs, 0 on lines), so curvature * radius == 1 holds exactly on
// arcs by construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fastlap/vec2.hpp"

namespace fastlap {

// Position/orientation of the curve at one arclength station.
struct CurveFrame {
  Vec2 point;
  Vec2 tangent;          // unit length
  double curvature{0.0};  // 1/m, >= 0
};

// Tolerance for C1 continuity at segment joins (position and tangent gap).
inline constexpr double kJoinTolerance = 1e-9;

class Segment {
 public:
  enum class Kind { kLine, kArc };

  static Segment line(const Vec2& start, const Vec2& end) {
    Segment s;
    s.kind_ = Kind::kLine;
    s.a_ = start;
    s.b_ = end;
    s.length_ = distance(start, end);
    if (!(s.length_ > 0.0)) throw std::invalid_argument("line segment must have positive length");
    s.dir_ = (end - start) / s.length_;
    return s;
  }

  // Counterclockwise for sweep > 0; |sweep| must lie in (0, 2*pi].
  static Segment arc(const Vec2& center, double radius, double start_angle, double sweep) {
    if (!(radius > 0.0)) throw std::invalid_argument("arc radius must be positive");
    if (!(std::abs(sweep) > 0.0) || std::abs(sweep) > 2.0 * std::numbers::pi + 1e-12) {
      throw std::invalid_argument("arc sweep must be nonzero and at most a full turn");
    }
    Segment s;
    s.kind_ = Kind::kArc;
    s.a_ = center;
    s.radius_ = radius;
    s.angle0_ = start_angle;
    s.sweep_ = sweep;
    s.length_ = radius * std::abs(sweep);
    return s;
  }

  Kind kind() const { return kind_; }
  double length() const { return length_; }
  double radius() const { return radius_; }
  const Vec2& center() const { return a_; }  // arcs only

  // s is local arclength in [0, length]; callers clamp.
  CurveFrame frame_at(double s) const {
    CurveFrame f;
    if (kind_ == Kind::kLine) {
      f.point = a_ + dir_ * s;
      f.tangent = dir_;
      f.curvature = 0.0;
    } else {
      const double sgn = sweep_ > 0.0 ? 1.0 : -1.0;
      const double ang = angle0_ + sgn * s / radius_;
      const Vec2 radial{std::cos(ang), std::sin(ang)};
      f.point = a_ + radial * radius_;
      f.tangent = perp(radial) * sgn;
      f.curvature = 1.0 / radius_;
    }
    return f;
  }

  Vec2 start_point() const { return frame_at(0.0).point; }
  Vec2 end_point() const { return frame_at(length_).point; }
  Vec2 start_tangent() const { return frame_at(0.0).tangent; }
  Vec2 end_tangent() const { return frame_at(length_).tangent; }

  struct LocalProjection {
    double s{0.0};   // local arclength of the foot point
    Vec2 point;      // foot point on the segment
    double dist{0.0};
  };

  // Closest point on the segment (endpoints included).
  LocalProjection project(const Vec2& p) const {
    LocalProjection r;
    if (kind_ == Kind::kLine) {
      r.s = std::clamp(dot(p - a_, dir_), 0.0, length_);
      r.point = a_ + dir_ * r.s;
    } else {
      const Vec2 d = p - a_;
      if (d.squared_norm() < 1e-24) {
        // Center of the arc: every point is equidistant; pick the start.
        r.s = 0.0;
      } else {
        const double phi = std::atan2(d.y, d.x);
        const double sgn = sweep_ > 0.0 ? 1.0 : -1.0;
        // Angle travelled from the start, in [0, 2*pi).
        double travelled = sgn * (phi - angle0_);
        travelled -= 2.0 * std::numbers::pi * std::floor(travelled / (2.0 * std::numbers::pi));
        const double total = std::abs(sweep_);
        if (travelled <= total) {
          r.s = travelled * radius_;
        } else {
          // Off the arc: the nearer endpoint wins (angular distance past the
          // end vs. around to the start).
          const double past_end = travelled - total;
          const double to_start = 2.0 * std::numbers::pi - travelled;
          r.s = past_end < to_start ? length_ : 0.0;
        }
      }
      r.point = frame_at(r.s).point;
    }
    r.dist = distance(p, r.point);
    return r;
  }

 private:
  Kind kind_{Kind::kLine};
  Vec2 a_;             // line start / arc center
  Vec2 b_;             // line end
  Vec2 dir_;           // line unit direction
  double radius_{0.0};
  double angle0_{0.0};
  double sweep_{0.0};
  double length_{0.0};
};

// C1 chain of segments. Arclength l runs over [0, L]; at interior joins the
// later segment owns the tie. For closed curves the end point and tangent
// must match the start, and l = L evaluates the end of the last segment
// (same frame as l = 0 up to the join tolerance).
class GeneratorCurve {
 public:
  explicit GeneratorCurve(std::vector<Segment> segments, bool closed = false)
      : segments_(std::move(segments)), closed_(closed) {
    if (segments_.empty()) throw std::invalid_argument("curve needs at least one segment");
    cumulative_.resize(segments_.size() + 1, 0.0);
    for (size_t i = 0; i < segments_.size(); ++i) {
      cumulative_[i + 1] = cumulative_[i] + segments_[i].length();
    }
    for (size_t i = 0; i + 1 < segments_.size(); ++i) {
      check_join(segments_[i].end_point(), segments_[i].end_tangent(),
                 segments_[i + 1].start_point(), segments_[i + 1].start_tangent(), i);
    }
    if (closed_) {
      check_join(segments_.back().end_point(), segments_.back().end_tangent(),
                 segments_.front().start_point(), segments_.front().start_tangent(),
                 segments_.size() - 1);
    }
  }

  double length() const { return cumulative_.back(); }
  bool closed() const { return closed_; }
  const std::vector<Segment>& segments() const { return segments_; }
  double segment_start(size_t i) const { return cumulative_[i]; }

  // Index of the segment owning arclength l; ties at joins go to the later
  // segment, and l = L maps to the last segment.
  size_t locate(double l) const {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), l);
    const size_t idx = static_cast<size_t>(std::distance(cumulative_.begin(), it));
    if (idx == 0) return 0;
    return std::min(idx - 1, segments_.size() - 1);
  }

  CurveFrame frame_at(double l) const {
    if (!(l >= -kJoinTolerance) || !(l <= length() + kJoinTolerance)) {
      throw std::domain_error("arclength outside [0, L]: " + std::to_string(l));
    }
    const double lc = std::clamp(l, 0.0, length());
    const size_t i = locate(lc);
    return segments_[i].frame_at(std::clamp(lc - cumulative_[i], 0.0, segments_[i].length()));
  }

  // Wrap an arbitrary arclength into [0, L) on closed curves; clamp otherwise.
  double canonical_l(double l) const {
    if (!closed_) return std::clamp(l, 0.0, length());
    const double L = length();
    double w = std::fmod(l, L);
    if (w < 0.0) w += L;
    return w;
  }

 private:
  static void check_join(const Vec2& end_p, const Vec2& end_t, const Vec2& start_p,
                         const Vec2& start_t, size_t index) {
    if (distance(end_p, start_p) > kJoinTolerance) {
      throw std::invalid_argument("curve is not C0 at join " + std::to_string(index));
    }
    if (distance(end_t, start_t) > kJoinTolerance) {
      throw std::invalid_argument("curve is not C1 at join " + std::to_string(index));
    }
  }

  std::vector<Segment> segments_;
  std::vector<double> cumulative_;
  bool closed_{false};
};

}  // namespace fastlap
