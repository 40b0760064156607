#pragma once
// JSON readers for track files and run-parameter files. Parsing is strict:
// unknown keys are rejected by name so typos fail loudly instead of being
// silently ignored.

#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fastlap/controller.hpp"
#include "fastlap/learner.hpp"
#include "fastlap/oracle.hpp"
#include "fastlap/plant.hpp"
#include "fastlap/tracks.hpp"

namespace fastlap {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void expect_keys(const nlohmann::json& j, const std::string& where,
                        std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ParseError("unknown key \"" + item.key() + "\" in " + where);
  }
}

inline double read_num(const nlohmann::json& j, const char* key, double fallback,
                       const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ParseError(where + "." + key + " must be a number");
  return j[key].get<double>();
}

inline int read_int(const nlohmann::json& j, const char* key, int fallback,
                    const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw ParseError(where + "." + key + " must be an integer");
  return j[key].get<int>();
}

inline std::vector<double> read_num_list(const nlohmann::json& j, const char* key,
                                         std::vector<double> fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_array()) throw ParseError(where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ParseError(where + "." + key + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline nlohmann::json parse_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ParseError(std::string("cannot open ") + what + " file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in ") + what + " file " + path + ": " + e.what());
  }
}

}  // namespace detail

// --- track files -----------------------------------------------------------

inline TrackSpec parse_track(const nlohmann::json& j) {
  detail::expect_keys(j, "track", {"name", "waypoints", "corner_radius", "closed", "radius"});
  TrackSpec spec;

  if (!j.contains("name") || !j["name"].is_string()) {
    throw ParseError("track.name must be a string");
  }
  spec.name = j["name"].get<std::string>();

  if (!j.contains("waypoints") || !j["waypoints"].is_array() || j["waypoints"].size() < 2) {
    throw ParseError("track.waypoints must be an array of at least two [x, y] pairs");
  }
  for (const auto& w : j["waypoints"]) {
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
      throw ParseError("track.waypoints entries must be [x, y] number pairs");
    }
    spec.waypoints.push_back({w[0].get<double>(), w[1].get<double>()});
  }

  if (!j.contains("corner_radius") || !j["corner_radius"].is_number()) {
    throw ParseError("track.corner_radius must be a number");
  }
  spec.corner_radius = j["corner_radius"].get<double>();
  if (!(spec.corner_radius > 0.0)) throw ParseError("track.corner_radius must be positive");

  if (!j.contains("closed") || !j["closed"].is_boolean()) {
    throw ParseError("track.closed must be a boolean");
  }
  spec.closed = j["closed"].get<bool>();

  if (!j.contains("radius")) throw ParseError("track.radius is required");
  const auto& r = j["radius"];
  if (r.is_number()) {
    spec.radius = RadiusProfile(r.get<double>());
  } else if (r.is_array()) {
    std::vector<std::pair<double, double>> bps;
    for (const auto& bp : r) {
      if (!bp.is_array() || bp.size() != 2 || !bp[0].is_number() || !bp[1].is_number()) {
        throw ParseError("track.radius breakpoints must be [arclength, radius] pairs");
      }
      bps.emplace_back(bp[0].get<double>(), bp[1].get<double>());
    }
    spec.radius = RadiusProfile(std::move(bps));
  } else {
    throw ParseError("track.radius must be a number or an array of [arclength, radius] pairs");
  }
  return spec;
}

inline TrackSpec load_track(const std::string& path) {
  return parse_track(detail::parse_file(path, "track"));
}

// --- run-parameter files ----------------------------------------------------

// Lap-time comparison against the dynamic-programming baseline.
struct CompareConfig {
  std::vector<double> taus{1.0, 5.0, 10.0, 30.0};
  std::vector<std::string> tracks{"square", "scurve"};
};

// Constant-curvature closed-form study grid. lambda defaults to the smallest
// swept equilibrium error x_th/k_p so the tightest cell sits exactly on the
// optimum.
struct SweepConfig {
  std::vector<double> x_th{0.45, 0.5, 0.55};
  std::vector<double> k_p{1.0, 1.15, 1.3};
  std::vector<double> radius{5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0};
  std::vector<double> k_prime{0.5, 1.0, 1.5, 2.0};
  double lambda{0.45 / 1.3};
  double arc_length{10.0};
  double v_max{5.0};
};

// Everything a run needs besides the track itself.
struct RunManifest {
  PlantParams plant;
  IlcParams ilc;
  LearningConfig learning;
  DpConfig oracle;
  CompareConfig compare;
  SweepConfig sweep;

  void validate() const {
    plant.validate();
    ilc.validate();
    learning.validate();
    oracle.validate();
    if (compare.taus.empty()) throw std::invalid_argument("compare.taus must not be empty");
    for (double t : compare.taus) {
      if (!(t > 0.0)) throw std::invalid_argument("compare.taus entries must be positive");
    }
    if (compare.tracks.empty()) throw std::invalid_argument("compare.tracks must not be empty");
    const auto positive_list = [](const std::vector<double>& v, const char* name) {
      if (v.empty()) throw std::invalid_argument(std::string("sweep.") + name + " must not be empty");
      for (double x : v) {
        if (!(x > 0.0)) {
          throw std::invalid_argument(std::string("sweep.") + name + " entries must be positive");
        }
      }
    };
    positive_list(sweep.x_th, "x_th");
    positive_list(sweep.k_p, "k_p");
    positive_list(sweep.radius, "radius");
    positive_list(sweep.k_prime, "k_prime");
    if (!(sweep.lambda >= 0.0)) throw std::invalid_argument("sweep.lambda must be >= 0");
    if (!(sweep.arc_length > 0.0)) throw std::invalid_argument("sweep.arc_length must be positive");
    if (!(sweep.v_max > 0.0)) throw std::invalid_argument("sweep.v_max must be positive");
  }
};

inline RunManifest parse_manifest(const nlohmann::json& j) {
  detail::expect_keys(j, "params",
                      {"plant", "ilc", "learning", "oracle", "compare", "sweep"});
  RunManifest m;

  if (j.contains("plant")) {
    const auto& p = j["plant"];
    detail::expect_keys(p, "plant", {"tau", "v_max", "dt"});
    m.plant.tau = detail::read_num(p, "tau", m.plant.tau, "plant");
    m.plant.v_max = detail::read_num(p, "v_max", m.plant.v_max, "plant");
    m.plant.dt = detail::read_num(p, "dt", m.plant.dt, "plant");
  }

  if (j.contains("ilc")) {
    const auto& p = j["ilc"];
    detail::expect_keys(p, "ilc",
                        {"k_p", "k_d", "k2", "k3", "k4", "x_th", "chi_alpha", "chi_beta",
                         "v_star_init", "v_star_cap"});
    m.ilc.k_p = detail::read_num(p, "k_p", m.ilc.k_p, "ilc");
    m.ilc.k_d = detail::read_num(p, "k_d", m.ilc.k_d, "ilc");
    m.ilc.k2 = detail::read_num(p, "k2", m.ilc.k2, "ilc");
    m.ilc.k3 = detail::read_num(p, "k3", m.ilc.k3, "ilc");
    m.ilc.k4 = detail::read_num(p, "k4", m.ilc.k4, "ilc");
    m.ilc.x_th = detail::read_num(p, "x_th", m.ilc.x_th, "ilc");
    m.ilc.chi_alpha = detail::read_num(p, "chi_alpha", m.ilc.chi_alpha, "ilc");
    m.ilc.chi_beta = detail::read_num(p, "chi_beta", m.ilc.chi_beta, "ilc");
    m.ilc.v_star_init = detail::read_num(p, "v_star_init", m.ilc.v_star_init, "ilc");
    m.ilc.v_star_cap = detail::read_num(p, "v_star_cap", m.ilc.v_star_cap, "ilc");
  }

  if (j.contains("learning")) {
    const auto& p = j["learning"];
    detail::expect_keys(p, "learning",
                        {"max_iterations", "convergence_tol", "convergence_window",
                         "failure_shrink", "failure_halo", "t_max", "v_init", "grid_spacing"});
    m.learning.max_iterations =
        detail::read_int(p, "max_iterations", m.learning.max_iterations, "learning");
    m.learning.convergence_tol =
        detail::read_num(p, "convergence_tol", m.learning.convergence_tol, "learning");
    m.learning.convergence_window =
        detail::read_int(p, "convergence_window", m.learning.convergence_window, "learning");
    m.learning.failure_shrink =
        detail::read_num(p, "failure_shrink", m.learning.failure_shrink, "learning");
    m.learning.failure_halo =
        detail::read_num(p, "failure_halo", m.learning.failure_halo, "learning");
    m.learning.limits.t_max = detail::read_num(p, "t_max", m.learning.limits.t_max, "learning");
    m.learning.limits.v_init = detail::read_num(p, "v_init", m.learning.limits.v_init, "learning");
    m.learning.grid_spacing =
        detail::read_num(p, "grid_spacing", m.learning.grid_spacing, "learning");
  }

  if (j.contains("oracle")) {
    const auto& p = j["oracle"];
    detail::expect_keys(p, "oracle",
                        {"dl", "speed_levels", "corridor_fraction", "corner_cut", "v_floor",
                         "v_init"});
    m.oracle.dl = detail::read_num(p, "dl", m.oracle.dl, "oracle");
    m.oracle.speed_levels = detail::read_int(p, "speed_levels", m.oracle.speed_levels, "oracle");
    m.oracle.corridor_fraction =
        detail::read_num(p, "corridor_fraction", m.oracle.corridor_fraction, "oracle");
    m.oracle.corner_cut = detail::read_num(p, "corner_cut", m.oracle.corner_cut, "oracle");
    m.oracle.v_floor = detail::read_num(p, "v_floor", m.oracle.v_floor, "oracle");
    m.oracle.v_init = detail::read_num(p, "v_init", m.oracle.v_init, "oracle");
  }

  if (j.contains("compare")) {
    const auto& p = j["compare"];
    detail::expect_keys(p, "compare", {"taus", "tracks"});
    m.compare.taus = detail::read_num_list(p, "taus", m.compare.taus, "compare");
    if (p.contains("tracks")) {
      if (!p["tracks"].is_array()) throw ParseError("compare.tracks must be an array of strings");
      m.compare.tracks.clear();
      for (const auto& t : p["tracks"]) {
        if (!t.is_string()) throw ParseError("compare.tracks must be an array of strings");
        m.compare.tracks.push_back(t.get<std::string>());
      }
    }
  }

  if (j.contains("sweep")) {
    const auto& p = j["sweep"];
    detail::expect_keys(p, "sweep",
                        {"x_th", "k_p", "radius", "k_prime", "lambda", "arc_length", "v_max"});
    m.sweep.x_th = detail::read_num_list(p, "x_th", m.sweep.x_th, "sweep");
    m.sweep.k_p = detail::read_num_list(p, "k_p", m.sweep.k_p, "sweep");
    m.sweep.radius = detail::read_num_list(p, "radius", m.sweep.radius, "sweep");
    m.sweep.k_prime = detail::read_num_list(p, "k_prime", m.sweep.k_prime, "sweep");
    m.sweep.lambda = detail::read_num(p, "lambda", m.sweep.lambda, "sweep");
    m.sweep.arc_length = detail::read_num(p, "arc_length", m.sweep.arc_length, "sweep");
    m.sweep.v_max = detail::read_num(p, "v_max", m.sweep.v_max, "sweep");
  }

  m.validate();
  return m;
}

inline RunManifest load_manifest(const std::string& path) {
  return parse_manifest(detail::parse_file(path, "params"));
}

}  // namespace fastlap
