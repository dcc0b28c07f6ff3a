#include "cito/run_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace cito {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

struct Stats {
  double mean = 0, ci95 = 0;
};

Stats mean_ci(const std::vector<double>& xs) {
  Stats s;
  const size_t n = xs.size();
  if (n == 0) return s;
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double var = 0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    var /= static_cast<double>(n - 1);
    s.ci95 = 1.96 * std::sqrt(var / static_cast<double>(n));
  }
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

AggregateRow aggregate_rows(const std::vector<MetricsRow>& rows) {
  AggregateRow agg;
  if (rows.empty()) return agg;
  agg.task = rows.front().task;
  agg.solver = rows.front().solver;
  agg.n = static_cast<int>(rows.size());
  int successes = 0;
  // Error/iteration/time statistics are taken over accepted (successful)
  // runs, success rate over all trials.
  std::vector<double> err, sweeps, time, deriv;
  for (const auto& r : rows) {
    if (r.success) {
      ++successes;
      err.push_back(r.tracking_error);
      sweeps.push_back(static_cast<double>(r.sweeps));
      time.push_back(r.wall_time_s);
      deriv.push_back(r.deriv_time_s);
    }
  }
  agg.success_rate = 100.0 * successes / static_cast<double>(rows.size());
  const Stats e = mean_ci(err), s = mean_ci(sweeps), t = mean_ci(time), d = mean_ci(deriv);
  agg.track_err_mean = e.mean;
  agg.track_err_ci95 = e.ci95;
  agg.sweeps_mean = s.mean;
  agg.sweeps_ci95 = s.ci95;
  agg.time_mean_s = t.mean;
  agg.time_ci95_s = t.ci95;
  agg.deriv_time_mean_s = d.mean;
  return agg;
}

void write_report(const SolveReport& report, const TaskMetrics& metrics,
                  const std::string& path) {
  auto out = open_out(path);
  out << "status: " << to_string(report.status) << "\n";
  out << "outer_iters: " << report.outer_iters << "\n";
  out << "total_sweeps: " << report.total_sweeps << "\n";
  out << "wall_time_s: " << format_double(report.wall_time_s) << "\n";
  out << "deriv_time_s: " << format_double(report.deriv_time_s) << "\n";
  out << "eq_inf: " << format_double(report.final_feasibility.eq_inf) << "\n";
  out << "ineq_inf: " << format_double(report.final_feasibility.ineq_inf) << "\n";
  out << "comp_inf: " << format_double(report.final_feasibility.comp_inf) << "\n";
  out << "success: " << (metrics.success ? 1 : 0) << "\n";
  out << "tracking_error: " << format_double(metrics.tracking_error) << "\n";
  out << "goal_error_inf: " << format_double(metrics.goal_error_inf) << "\n";
  out << "stuck: " << (metrics.stuck ? 1 : 0) << "\n";
}

void write_trajectory(const TaskSpec& spec, const MpccProblem& p, const SolveReport& report,
                      const std::string& path) {
  auto out = open_out(path);
  out << "t,time";
  for (int i = 0; i < spec.n_q; ++i) out << ",q" << i;
  for (int i = 0; i < spec.n_u; ++i) out << ",u" << i;
  for (int i = 0; i < p.n_c; ++i) out << ",G" << i;
  for (int i = 0; i < p.n_c; ++i) out << ",H" << i;
  for (int i = 0; i < p.n_c; ++i) out << ",y" << i;
  for (int i = 0; i < p.n_c; ++i) out << ",z" << i;
  out << "\n";
  Vec Gv(p.n_c), Hv(p.n_c);
  // The penalty baseline carries no slack variables; those columns are zero.
  const bool has_slack = report.final_w.Y.size() == p.pair_dim();
  for (int t = 0; t < p.T; ++t) {
    auto xt = report.final_w.X.segment(t * p.n_x, p.n_x);
    out << t << "," << format_double((t + 1) * spec.dt);
    const Vec pose = pose_at(spec, report.final_w.X, t);
    for (int i = 0; i < spec.n_q; ++i) out << "," << format_double(pose[i]);
    for (int i = 0; i < spec.n_u; ++i) out << "," << format_double(xt[i]);
    if (p.n_c > 0) {
      p.G(t, xt, Gv);
      p.H(t, xt, Hv);
      for (int i = 0; i < p.n_c; ++i) out << "," << format_double(Gv[i]);
      for (int i = 0; i < p.n_c; ++i) out << "," << format_double(Hv[i]);
      for (int i = 0; i < p.n_c; ++i)
        out << "," << format_double(has_slack ? report.final_w.Y[t * p.n_c + i] : 0.0);
      for (int i = 0; i < p.n_c; ++i)
        out << "," << format_double(has_slack ? report.final_w.Z[t * p.n_c + i] : 0.0);
    }
    out << "\n";
  }
}

void write_sweep_trace(const std::vector<SweepRecord>& sweeps, const std::string& path) {
  auto out = open_out(path);
  out << "outer,sweep,phi_before,phi_after,dphi,gx_inf,step_len,backtracks,gn_iters\n";
  for (const auto& s : sweeps) {
    out << s.outer << "," << s.sweep << "," << format_double(s.phi_before) << ","
        << format_double(s.phi_after) << "," << format_double(s.dphi) << ","
        << format_double(s.gx_inf) << "," << format_double(s.step_len) << "," << s.backtracks
        << "," << s.gn_iters << "\n";
  }
}

namespace {

void write_metrics_header(std::ofstream& out, bool with_time) {
  out << "task,solver,seed,trial,success,tracking_error,sweeps,outer_iters,eq_inf,ineq_inf,"
         "comp_inf,status";
  if (with_time) out << ",wall_time_s,deriv_time_s";
  out << "\n";
}

void write_metrics_row(std::ofstream& out, const MetricsRow& r, bool with_time) {
  out << r.task << "," << r.solver << "," << r.seed << "," << r.trial << ","
      << (r.success ? 1 : 0) << "," << format_double(r.tracking_error) << "," << r.sweeps
      << "," << r.outer_iters << "," << format_double(r.eq_inf) << ","
      << format_double(r.ineq_inf) << "," << format_double(r.comp_inf) << "," << r.status;
  if (with_time) {
    out << "," << format_double(r.wall_time_s) << "," << format_double(r.deriv_time_s);
  }
  out << "\n";
}

}  // namespace

void write_metrics(const std::vector<MetricsRow>& rows, const std::string& path) {
  auto out = open_out(path);
  write_metrics_header(out, /*with_time=*/false);
  for (const auto& r : rows) write_metrics_row(out, r, false);
}

void write_trials(const std::vector<MetricsRow>& rows, const std::string& path) {
  auto out = open_out(path);
  write_metrics_header(out, /*with_time=*/true);
  for (const auto& r : rows) write_metrics_row(out, r, true);
}

void write_aggregate(const std::vector<AggregateRow>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "task,solver,n,success_rate,track_err_mean,track_err_ci95,sweeps_mean,sweeps_ci95,"
         "time_mean_s,time_ci95_s,deriv_time_mean_s\n";
  for (const auto& a : rows) {
    out << a.task << "," << a.solver << "," << a.n << "," << format_double(a.success_rate)
        << "," << format_double(a.track_err_mean) << "," << format_double(a.track_err_ci95)
        << "," << format_double(a.sweeps_mean) << "," << format_double(a.sweeps_ci95) << ","
        << format_double(a.time_mean_s) << "," << format_double(a.time_ci95_s) << ","
        << format_double(a.deriv_time_mean_s) << "\n";
  }
}

}  // namespace cito
