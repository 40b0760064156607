#pragma once
// Uniform arclength grid shared by lap traces, speed profiles and error
// profiles. Both endpoints are samples, so spacing = length / (count - 1) and
// the last sample sits exactly at l = L.

#include <cmath>
#include <stdexcept>

namespace fastlap {

// Default sample spacing for traces and learned profiles, meters.
inline constexpr double kDefaultGridSpacing = 0.05;

struct ArclengthGrid {
  double length{0.0};
  int count{0};

  static ArclengthGrid with_spacing(double length, double target_spacing = kDefaultGridSpacing) {
    if (!(length > 0.0) || !(target_spacing > 0.0)) {
      throw std::invalid_argument("grid needs positive length and spacing");
    }
    const int cells = std::max(1, static_cast<int>(std::ceil(length / target_spacing - 1e-9)));
    return {length, cells + 1};
  }

  double spacing() const { return length / (count - 1); }
  double l_at(int i) const { return i == count - 1 ? length : i * spacing(); }

  bool operator==(const ArclengthGrid& o) const {
    return count == o.count && std::abs(length - o.length) < 1e-12;
  }
};

// Linear interpolation of uniformly gridded samples at arbitrary l (clamped).
template <typename Container>
double grid_interpolate(const ArclengthGrid& grid, const Container& samples, double l) {
  const double h = grid.spacing();
  const double u = l / h;
  if (u <= 0.0) return samples[0];
  if (u >= grid.count - 1) return samples[grid.count - 1];
  const int i = static_cast<int>(u);
  const double t = u - i;
  return samples[i] + (samples[i + 1] - samples[i]) * t;
}

}  // namespace fastlap
