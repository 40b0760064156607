#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastlap/track_io.hpp"

using namespace fastlap;
using Catch::Approx;
using nlohmann::json;

#ifndef FASTLAP_SOURCE_DIR
#error "FASTLAP_SOURCE_DIR must point at the repository root"
#endif

namespace {
const std::string kSourceDir = FASTLAP_SOURCE_DIR;
}

TEST_CASE("parse_track: constant radius form") {
  const json j = json::parse(R"({
    "name": "demo",
    "waypoints": [[0, 0], [10, 0], [10, 10]],
    "corner_radius": 2.0,
    "closed": false,
    "radius": 1.5
  })");
  const TrackSpec spec = parse_track(j);
  REQUIRE(spec.name == "demo");
  REQUIRE(spec.waypoints.size() == 3);
  REQUIRE(spec.waypoints[2].y == Approx(10.0));
  REQUIRE(spec.corner_radius == Approx(2.0));
  REQUIRE_FALSE(spec.closed);
  REQUIRE(spec.radius.breakpoints().size() == 1);
  REQUIRE(spec.radius(4.0) == Approx(1.5));
  REQUIRE_NOTHROW(spec.build_tube());
}

TEST_CASE("parse_track: breakpoint radius form") {
  const json j = json::parse(R"({
    "name": "narrowing",
    "waypoints": [[0, 0], [20, 0]],
    "corner_radius": 1.0,
    "closed": false,
    "radius": [[0, 2.0], [10, 1.0], [20, 2.0]]
  })");
  const TrackSpec spec = parse_track(j);
  REQUIRE(spec.radius(0.0) == Approx(2.0));
  REQUIRE(spec.radius(5.0) == Approx(1.5));
  REQUIRE(spec.radius(10.0) == Approx(1.0));
}

TEST_CASE("parse_track rejects unknown keys by name") {
  json j = json::parse(R"({
    "name": "demo",
    "waypoints": [[0, 0], [10, 0]],
    "corner_radius": 2.0,
    "closed": false,
    "radius": 1.5,
    "corner_radiu": 3.0
  })");
  REQUIRE_THROWS_WITH(parse_track(j), Catch::Matchers::ContainsSubstring("corner_radiu") &&
                                          Catch::Matchers::ContainsSubstring("track"));
}

TEST_CASE("parse_track type errors name the field") {
  const auto base = json::parse(R"({
    "name": "demo",
    "waypoints": [[0, 0], [10, 0]],
    "corner_radius": 2.0,
    "closed": false,
    "radius": 1.5
  })");

  json j = base;
  j["name"] = 7;
  REQUIRE_THROWS_WITH(parse_track(j), Catch::Matchers::ContainsSubstring("track.name"));

  j = base;
  j["waypoints"] = json::array({json::array({0.0, 0.0})});
  REQUIRE_THROWS_WITH(parse_track(j), Catch::Matchers::ContainsSubstring("track.waypoints"));

  j = base;
  j["waypoints"] = json::parse("[[0, 0], [1, \"x\"]]");
  REQUIRE_THROWS_WITH(parse_track(j), Catch::Matchers::ContainsSubstring("[x, y]"));

  j = base;
  j["corner_radius"] = -1.0;
  REQUIRE_THROWS_WITH(parse_track(j), Catch::Matchers::ContainsSubstring("corner_radius"));

  j = base;
  j["closed"] = "yes";
  REQUIRE_THROWS_WITH(parse_track(j), Catch::Matchers::ContainsSubstring("track.closed"));

  j = base;
  j["radius"] = "wide";
  REQUIRE_THROWS_WITH(parse_track(j), Catch::Matchers::ContainsSubstring("track.radius"));

  j = base;
  j.erase("name");
  REQUIRE_THROWS_AS(parse_track(j), ParseError);
}

TEST_CASE("bundled track files match the built-in definitions") {
  for (const std::string& name : bundled_track_names()) {
    const TrackSpec file = load_track(kSourceDir + "/tracks/" + name + ".json");
    const TrackSpec code = *bundled_track(name);
    INFO("track " << name);
    REQUIRE(file.name == code.name);
    REQUIRE(file.closed == code.closed);
    REQUIRE(file.corner_radius == code.corner_radius);
    REQUIRE(file.waypoints.size() == code.waypoints.size());
    for (size_t i = 0; i < file.waypoints.size(); ++i) {
      REQUIRE(file.waypoints[i].x == code.waypoints[i].x);
      REQUIRE(file.waypoints[i].y == code.waypoints[i].y);
    }
    REQUIRE(file.radius.breakpoints() == code.radius.breakpoints());
    // Both build identical tubes.
    REQUIRE(file.build_tube().length() == Approx(code.build_tube().length()).epsilon(1e-15));
  }
}

TEST_CASE("load failures name the path") {
  REQUIRE_THROWS_WITH(load_track("/nonexistent/nowhere.json"),
                      Catch::Matchers::ContainsSubstring("/nonexistent/nowhere.json"));
}

TEST_CASE("manifest defaults apply when sections are absent") {
  const RunManifest m = parse_manifest(json::object());
  REQUIRE(m.plant.tau == 10.0);
  REQUIRE(m.plant.v_max == 5.0);
  REQUIRE(m.plant.dt == 0.01);
  REQUIRE(m.ilc.k_p == 1.0);
  REQUIRE(m.ilc.x_th == 0.5);
  REQUIRE(m.ilc.v_star_cap == 50.0);
  REQUIRE(m.learning.max_iterations == 20);
  REQUIRE(m.learning.limits.t_max == 120.0);
  REQUIRE(m.oracle.dl == 0.1);
  REQUIRE(m.oracle.speed_levels == 100);
  REQUIRE(m.compare.taus == std::vector<double>{1.0, 5.0, 10.0, 30.0});
  REQUIRE(m.compare.tracks == std::vector<std::string>{"square", "scurve"});
  REQUIRE(m.sweep.lambda == Approx(0.45 / 1.3));
  REQUIRE(m.sweep.radius.size() == 10);
}

TEST_CASE("manifest overrides apply per section") {
  const json j = json::parse(R"({
    "plant": {"tau": 5.0},
    "ilc": {"k_d": 0.2, "v_star_init": 2.0},
    "learning": {"max_iterations": 50, "t_max": 60.0, "v_init": 1.0},
    "oracle": {"dl": 0.05, "speed_levels": 199},
    "compare": {"taus": [10.0], "tracks": ["circle"]},
    "sweep": {"lambda": 0.1, "radius": [10.0, 20.0]}
  })");
  const RunManifest m = parse_manifest(j);
  REQUIRE(m.plant.tau == 5.0);
  REQUIRE(m.plant.v_max == 5.0);  // untouched default
  REQUIRE(m.ilc.k_d == 0.2);
  REQUIRE(m.ilc.v_star_init == 2.0);
  REQUIRE(m.learning.max_iterations == 50);
  REQUIRE(m.learning.limits.t_max == 60.0);
  REQUIRE(m.learning.limits.v_init == 1.0);
  REQUIRE(m.oracle.dl == 0.05);
  REQUIRE(m.oracle.speed_levels == 199);
  REQUIRE(m.compare.taus == std::vector<double>{10.0});
  REQUIRE(m.compare.tracks == std::vector<std::string>{"circle"});
  REQUIRE(m.sweep.lambda == 0.1);
  REQUIRE(m.sweep.radius == std::vector<double>{10.0, 20.0});
}

TEST_CASE("manifest rejects unknown keys in each section") {
  REQUIRE_THROWS_WITH(parse_manifest(json::parse(R"({"plant": {"tau": 5.0, "taus": 1.0}})")),
                      Catch::Matchers::ContainsSubstring("taus") &&
                          Catch::Matchers::ContainsSubstring("plant"));
  REQUIRE_THROWS_WITH(parse_manifest(json::parse(R"({"ilc": {"kp": 1.0}})")),
                      Catch::Matchers::ContainsSubstring("kp"));
  REQUIRE_THROWS_WITH(parse_manifest(json::parse(R"({"oracles": {}})")),
                      Catch::Matchers::ContainsSubstring("oracles"));
  REQUIRE_THROWS_WITH(parse_manifest(json::parse(R"({"learning": {"tmax": 60}})")),
                      Catch::Matchers::ContainsSubstring("tmax"));
}

TEST_CASE("manifest type errors name section and key") {
  REQUIRE_THROWS_WITH(parse_manifest(json::parse(R"({"plant": {"tau": "fast"}})")),
                      Catch::Matchers::ContainsSubstring("plant.tau"));
  REQUIRE_THROWS_WITH(parse_manifest(json::parse(R"({"oracle": {"speed_levels": 99.5}})")),
                      Catch::Matchers::ContainsSubstring("oracle.speed_levels"));
  REQUIRE_THROWS_WITH(parse_manifest(json::parse(R"({"compare": {"taus": [1, "x"]}})")),
                      Catch::Matchers::ContainsSubstring("compare.taus"));
  REQUIRE_THROWS_WITH(parse_manifest(json::parse(R"({"compare": {"tracks": [3]}})")),
                      Catch::Matchers::ContainsSubstring("compare.tracks"));
}

TEST_CASE("manifest validation catches bad values") {
  REQUIRE_THROWS_AS(parse_manifest(json::parse(R"({"plant": {"tau": -1.0}})")),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_manifest(json::parse(R"({"compare": {"taus": []}})")),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_manifest(json::parse(R"({"compare": {"taus": [-5.0]}})")),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_manifest(json::parse(R"({"sweep": {"radius": []}})")),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_manifest(json::parse(R"({"sweep": {"k_prime": [0.5, 0.0]}})")),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_manifest(json::parse(R"({"sweep": {"lambda": -0.2}})")),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_manifest(json::parse(R"({"oracle": {"speed_levels": 10}})")),
                    std::invalid_argument);
}

TEST_CASE("top-level params object rejects unknown sections") {
  REQUIRE_THROWS_WITH(parse_manifest(json::parse(R"({"plan": {}})")),
                      Catch::Matchers::ContainsSubstring("plan"));
}
