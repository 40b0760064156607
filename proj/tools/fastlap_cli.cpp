// Command-line front end: learn a speed profile on a track, query the
// dynamic-programming baseline, compare the two across plants, or tabulate
// the constant-curvature closed forms.
//
// Exit codes: 0 success, 2 bad input (unknown track, malformed file, invalid
// parameters), 3 runtime failure (infeasible baseline, first-lap crash).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fastlap/csv.hpp"
#include "fastlap/learner.hpp"
#include "fastlap/oracle.hpp"
#include "fastlap/track_io.hpp"
#include "fastlap/tracks.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fastlap;

constexpr int kExitBadInput = 2;
constexpr int kExitRuntime = 3;

// Bundled name first, then a file path.
TrackSpec resolve_track(const std::string& name) {
  if (auto spec = bundled_track(name)) return *spec;
  if (fs::exists(name)) return load_track(name);
  std::string names;
  for (const auto& n : bundled_track_names()) names += (names.empty() ? "" : ", ") + n;
  throw ParseError("track not found: " + name + " (not a bundled track [" + names +
                   "] and no such file)");
}

fs::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("FASTLAP_OUT")) {
    if (*env) return env;
  }
  return "fastlap_out";
}

double wall_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_learn(const TrackSpec& spec, const RunManifest& m, const fs::path& out, bool verbose) {
  const VirtualTube tube = spec.build_tube();
  const auto report = [&](const IterationRecord& rec) {
    if (!verbose) return;
    if (rec.outcome == LapOutcome::kFinished) {
      std::printf("  iter %2d: %s  lap %.4f s  max|e| %.4f m\n", rec.iteration,
                  outcome_name(rec.outcome), rec.lap_time, rec.max_e_norm);
    } else {
      std::printf("  iter %2d: %s at l=%.2f m\n", rec.iteration, outcome_name(rec.outcome),
                  rec.fail_l);
    }
  };

  const LearningRun run = run_learning(tube, m.plant, m.ilc, m.learning, report);

  write_summary_csv((out / "summary.csv").string(), run);
  write_profile_csv((out / "profile.csv").string(), run);
  const fs::path snapdir = out / "profiles";
  fs::create_directories(snapdir);
  for (const auto& rec : run.records) {
    char name[32];
    std::snprintf(name, sizeof(name), "iter_%03d.csv", rec.iteration);
    write_iteration_csv((snapdir / name).string(), rec);
  }
  if (!run.records.empty()) {
    write_trace_csv((out / "trace.csv").string(), run.last_trace, run.records.back().profile);
  }

  std::printf("track %s: %zu iterations, %s\n", spec.name.c_str(), run.records.size(),
              run.converged ? "converged" : "not converged");
  if (run.best_iteration >= 0) {
    std::printf("best lap %.4f s (iteration %d)\n", run.best_lap_time, run.best_iteration);
  }
  std::printf("simulated %.2f s of flight; wall %.3f s\n", run.total_sim_time, run.wall_seconds);
  std::printf("wrote %s\n", (out / "summary.csv").string().c_str());
  return 0;
}

int run_oracle(const TrackSpec& spec, const RunManifest& m, const fs::path& out) {
  const VirtualTube tube = spec.build_tube();
  const auto t0 = std::chrono::steady_clock::now();
  const DpResult dp = dp_lap_time(tube, m.plant, m.oracle);
  const double wall = wall_since(t0);
  if (!dp.feasible) {
    std::fprintf(stderr, "baseline infeasible on %s: no admissible speed at l=%.2f m\n",
                 spec.name.c_str(), dp.infeasible_l);
    return kExitRuntime;
  }
  auto csv = detail::open_csv((out / "oracle.csv").string());
  csv << "track,tau,dp_time_s\n";
  csv << spec.name << ',' << csv_num(m.plant.tau) << ',' << csv_num(dp.lap_time) << '\n';
  std::printf("track %s: baseline lap %.4f s (wall %.3f s)\n", spec.name.c_str(), dp.lap_time,
              wall);
  std::printf("wrote %s\n", (out / "oracle.csv").string().c_str());
  return 0;
}

int run_compare(const RunManifest& m, const fs::path& out, bool verbose) {
  std::vector<CompareRow> rows;
  double ilc_wall = 0.0;
  double dp_wall = 0.0;
  for (const auto& track_name : m.compare.tracks) {
    const TrackSpec spec = resolve_track(track_name);
    const VirtualTube tube = spec.build_tube();
    for (const double tau : m.compare.taus) {
      PlantParams plant = m.plant;
      plant.tau = tau;

      auto t0 = std::chrono::steady_clock::now();
      const DpResult dp = dp_lap_time(tube, plant, m.oracle);
      dp_wall += wall_since(t0);
      if (!dp.feasible) {
        // Reported per row; the remaining (track, tau) cells still run.
        std::fprintf(stderr, "baseline infeasible on %s (tau=%g) at l=%.2f m\n",
                     spec.name.c_str(), tau, dp.infeasible_l);
      }

      t0 = std::chrono::steady_clock::now();
      const LearningRun run = run_learning(tube, plant, m.ilc, m.learning);
      ilc_wall += wall_since(t0);

      CompareRow row;
      row.track = spec.name;
      row.tau = tau;
      row.dp_time_s = dp.lap_time;  // nan when infeasible
      row.ilc_time_s = converged_lap_time(run);
      row.ratio = row.ilc_time_s / dp.lap_time;
      row.ilc_train_sim_s = run.total_sim_time;
      rows.push_back(row);
      if (verbose) {
        std::printf("  %s tau=%g: dp %.4f s, learned %.4f s, ratio %.4f\n", spec.name.c_str(),
                    tau, dp.lap_time, row.ilc_time_s, row.ratio);
      }
    }
  }
  write_compare_csv((out / "compare.csv").string(), rows);
  std::printf("%zu comparisons; learner wall %.3f s, baseline wall %.3f s (ratio %.3f)\n",
              rows.size(), ilc_wall, dp_wall, ilc_wall / dp_wall);
  std::printf("wrote %s\n", (out / "compare.csv").string().c_str());
  return 0;
}

int run_sweep(const RunManifest& m, const fs::path& out) {
  std::vector<SweepRow> rows;
  // r innermost: each (x_th, k_p, k') slice is a contiguous ascending-r block.
  for (const double x_th : m.sweep.x_th) {
    for (const double k_p : m.sweep.k_p) {
      for (const double k_prime : m.sweep.k_prime) {
        for (const double r : m.sweep.radius) {
          ArcCase c;
          c.arc_length = m.sweep.arc_length;
          c.radius = r;
          c.k_prime = k_prime;
          c.x_th = x_th;
          c.k_p = k_p;
          c.v_max = m.sweep.v_max;
          c.lambda = m.sweep.lambda;
          SweepRow row;
          row.x_th = x_th;
          row.k_p = k_p;
          row.r = r;
          row.k_prime = k_prime;
          row.lambda = c.lambda;
          row.T = arc_lap_time(c);
          row.T_op = arc_optimal_time(c);
          row.ratio = row.T / row.T_op;
          rows.push_back(row);
        }
      }
    }
  }
  write_sweep_csv((out / "sweep.csv").string(), rows);
  std::printf("%zu sweep cells\n", rows.size());
  std::printf("wrote %s\n", (out / "sweep.csv").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tube-following lap-time learner with time-optimal baselines"};
  std::string mode;
  std::string track = "square";
  std::string params_path;
  std::string out_flag;
  unsigned seed = 0;
  bool verbose = false;

  app.add_option("--mode", mode, "learn | oracle | compare | sweep")
      ->required()
      ->check(CLI::IsMember({"learn", "oracle", "compare", "sweep"}));
  app.add_option("--track", track, "bundled track name or track file path");
  app.add_option("--params", params_path, "JSON run-parameter file");
  app.add_option("--out", out_flag, "output directory (default $FASTLAP_OUT or ./fastlap_out)");
  app.add_option("--seed", seed, "accepted for interface compatibility; runs are deterministic");
  app.add_flag("--verbose", verbose, "per-iteration progress");
  CLI11_PARSE(app, argc, argv);

  try {
    RunManifest manifest;
    if (!params_path.empty()) manifest = load_manifest(params_path);

    const fs::path out = resolve_out_dir(out_flag);
    fs::create_directories(out);

    if (mode == "sweep") return run_sweep(manifest, out);
    if (mode == "compare") return run_compare(manifest, out, verbose);

    const TrackSpec spec = resolve_track(track);
    if (mode == "oracle") return run_oracle(spec, manifest, out);
    return run_learn(spec, manifest, out, verbose);
  } catch (const ConfigurationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  }
}
