#pragma once
// CSV output for traces, learning summaries and study tables, plus a small
// reader for round-trips. Numbers are printed with %.9g so identical runs
// produce byte-identical files.

#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastlap/controller.hpp"
#include "fastlap/learner.hpp"
#include "fastlap/sim.hpp"

namespace fastlap {

inline std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace detail

// One row per grid crossing of a single lap: l,t,x,y,vx,vy,pace,e_norm,
// cmd_x,cmd_y,v_star.
inline void write_trace_csv(const std::string& path, const LapTrace& trace,
                            const SpeedProfile& profile) {
  auto out = detail::open_csv(path);
  out << "l,t,x,y,vx,vy,pace,e_norm,cmd_x,cmd_y,v_star\n";
  for (const auto& s : trace.samples) {
    out << csv_num(s.l) << ',' << csv_num(s.t) << ',' << csv_num(s.p.x) << ',' << csv_num(s.p.y)
        << ',' << csv_num(s.v.x) << ',' << csv_num(s.v.y) << ',' << csv_num(s.pace) << ','
        << csv_num(s.e_norm) << ',' << csv_num(s.cmd.x) << ',' << csv_num(s.cmd.y) << ','
        << csv_num(profile(s.l)) << '\n';
  }
}

// One row per learning iteration: iteration,lap_time_s,outcome,max_e_norm.
inline void write_summary_csv(const std::string& path, const LearningRun& run) {
  auto out = detail::open_csv(path);
  out << "iteration,lap_time_s,outcome,max_e_norm\n";
  for (const auto& r : run.records) {
    out << r.iteration << ',' << csv_num(r.lap_time) << ',' << outcome_name(r.outcome) << ','
        << csv_num(r.max_e_norm) << '\n';
  }
}

// Final learned profile per grid station: l,v_star,e_norm (e_norm from the
// last finished lap; nan where never measured).
inline void write_profile_csv(const std::string& path, const LearningRun& run) {
  auto out = detail::open_csv(path);
  out << "l,v_star,e_norm\n";
  const auto& grid = run.final_profile.grid;
  for (size_t i = 0; i < run.final_profile.v_star.size(); ++i) {
    const bool have = !run.records.empty() && i < run.records.back().e_norm.size();
    const double e = have ? run.records.back().e_norm[i] : std::numeric_limits<double>::quiet_NaN();
    out << csv_num(grid.l_at(i)) << ',' << csv_num(run.final_profile.v_star[i]) << ','
        << csv_num(e) << '\n';
  }
}

// Snapshot of one learning iteration: l,v_star,e_norm -- the profile flown
// and the error it produced (nan past a failure point).
inline void write_iteration_csv(const std::string& path, const IterationRecord& rec) {
  auto out = detail::open_csv(path);
  out << "l,v_star,e_norm\n";
  for (size_t i = 0; i < rec.profile.v_star.size(); ++i) {
    const double e = i < rec.e_norm.size() ? rec.e_norm[i] : std::numeric_limits<double>::quiet_NaN();
    out << csv_num(rec.profile.grid.l_at(static_cast<int>(i))) << ','
        << csv_num(rec.profile.v_star[i]) << ',' << csv_num(e) << '\n';
  }
}

// Learned-vs-baseline lap times: track,tau,dp_time_s,ilc_time_s,ratio,
// ilc_train_sim_s. Wall-clock times are deliberately not recorded here so the
// file stays identical across runs.
struct CompareRow {
  std::string track;
  double tau{0.0};
  double dp_time_s{0.0};
  double ilc_time_s{0.0};
  double ratio{0.0};
  double ilc_train_sim_s{0.0};
};

inline void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows) {
  auto out = detail::open_csv(path);
  out << "track,tau,dp_time_s,ilc_time_s,ratio,ilc_train_sim_s\n";
  for (const auto& r : rows) {
    out << r.track << ',' << csv_num(r.tau) << ',' << csv_num(r.dp_time_s) << ','
        << csv_num(r.ilc_time_s) << ',' << csv_num(r.ratio) << ',' << csv_num(r.ilc_train_sim_s)
        << '\n';
  }
}

// Closed-form constant-curvature study: x_th,k_p,r,k_prime,lambda,T,T_op,ratio.
struct SweepRow {
  double x_th{0.0};
  double k_p{0.0};
  double r{0.0};
  double k_prime{0.0};
  double lambda{0.0};
  double T{0.0};
  double T_op{0.0};
  double ratio{0.0};
};

inline void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  auto out = detail::open_csv(path);
  out << "x_th,k_p,r,k_prime,lambda,T,T_op,ratio\n";
  for (const auto& r : rows) {
    out << csv_num(r.x_th) << ',' << csv_num(r.k_p) << ',' << csv_num(r.r) << ','
        << csv_num(r.k_prime) << ',' << csv_num(r.lambda) << ',' << csv_num(r.T) << ','
        << csv_num(r.T_op) << ',' << csv_num(r.ratio) << '\n';
  }
}

// Minimal reader: header row plus string cells (no quoting; our writers never
// emit commas inside fields).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open csv file: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

}  // namespace fastlap
