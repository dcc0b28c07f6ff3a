#pragma once

#include "cito/aula.hpp"
#include "cito/tasks.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cito {

// One benchmark trial. Deterministic fields go to metrics.csv; wall-clock
// fields additionally to trials.csv so repeated runs with the same seed
// produce bitwise-identical metrics files.
struct MetricsRow {
  std::string task;
  std::string solver;
  std::uint64_t seed = 0;
  int trial = 0;
  bool success = false;
  double tracking_error = 0;
  long sweeps = 0;
  int outer_iters = 0;
  double eq_inf = 0, ineq_inf = 0, comp_inf = 0;
  std::string status;
  double wall_time_s = 0;
  double deriv_time_s = 0;
};

struct AggregateRow {
  std::string task;
  std::string solver;
  int n = 0;
  double success_rate = 0;  // percent
  double track_err_mean = 0, track_err_ci95 = 0;
  double sweeps_mean = 0, sweeps_ci95 = 0;
  double time_mean_s = 0, time_ci95_s = 0;
  double deriv_time_mean_s = 0;
};

// mean +- 1.96 * stderr over the per-trial rows, in trial order.
AggregateRow aggregate_rows(const std::vector<MetricsRow>& rows);

// All numeric fields use round-trip decimal formatting ("%.17g").
std::string format_double(double v);

void write_report(const SolveReport& report, const TaskMetrics& metrics,
                  const std::string& path);
void write_trajectory(const TaskSpec& spec, const MpccProblem& p, const SolveReport& report,
                      const std::string& path);
void write_sweep_trace(const std::vector<SweepRecord>& sweeps, const std::string& path);
void write_metrics(const std::vector<MetricsRow>& rows, const std::string& path);
void write_trials(const std::vector<MetricsRow>& rows, const std::string& path);
void write_aggregate(const std::vector<AggregateRow>& rows, const std::string& path);

}  // namespace cito
