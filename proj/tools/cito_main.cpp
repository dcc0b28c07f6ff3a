// Command-line harness: single solves, benchmark sweeps, and the diagnostics
// studies (inner-residual correlation, toy method paths). All numeric output
// uses round-trip decimal formatting; metrics.csv holds only deterministic
// fields so identical seeds reproduce identical files.

#include "cito/penalty.hpp"
#include "cito/run_io.hpp"
#include "cito/stationarity.hpp"
#include "cito/tasks.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace cito;

namespace {

struct RunManifest {
  std::string task;
  std::string solver = "impact";
  std::uint64_t seed = 0;
  int trials = 1;
  int jobs = 1;
  std::string out_dir = "out";
  std::string config_file;
  double rho_c = 1e6;
};

std::uint64_t trial_seed(std::uint64_t base, int trial) {
  // splitmix-style mix so per-trial streams are independent of --jobs
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TaskSpec load_spec(const RunManifest& rm) {
  TaskSpec spec = task_spec_by_id(rm.task);
  if (!rm.config_file.empty()) {
    spec = apply_manifest(spec, read_manifest(rm.config_file));
  }
  return spec;
}

SolveReport run_solver(const RunManifest& rm, const TaskSpec& spec, const MpccProblem& prob,
                       CVecRef x0,
                       const std::function<void(const VerticalState&, const SweepRecord&)>&
                           hook = nullptr) {
  if (rm.solver == "impact") {
    return aula_solve(prob, x0, make_aula_config(spec), make_bcd_config(spec), hook);
  }
  PenaltyConfig pc;
  pc.rho_c = rm.rho_c;
  pc.aula = make_aula_config(spec);
  pc.bcd = make_bcd_config(spec);
  return penalty_solve(prob, x0, pc, hook);
}

MetricsRow make_row(const RunManifest& rm, const TaskSpec& spec, const SolveReport& rep,
                    const GoalSpec& goal, int trial, std::uint64_t seed) {
  const TaskMetrics tm = evaluate_metrics(spec, rep, goal);
  MetricsRow row;
  row.task = rm.task;
  row.solver = rm.solver;
  row.seed = seed;
  row.trial = trial;
  row.success = tm.success;
  row.tracking_error = tm.tracking_error;
  row.sweeps = rep.total_sweeps;
  row.outer_iters = rep.outer_iters;
  row.eq_inf = rep.final_feasibility.eq_inf;
  row.ineq_inf = rep.final_feasibility.ineq_inf;
  row.comp_inf = rep.final_feasibility.comp_inf;
  row.status = to_string(rep.status);
  row.wall_time_s = rep.wall_time_s;
  row.deriv_time_s = rep.deriv_time_s;
  return row;
}

void parallel_for_trials(int trials, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 1) {
    for (int i = 0; i < trials; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int n_threads = std::min(jobs, trials);
  pool.reserve(n_threads);
  for (int k = 0; k < n_threads; ++k) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

int cmd_solve(const RunManifest& rm) {
  const TaskSpec spec = load_spec(rm);
  const GoalSpec goal = sample_goal(spec, rm.seed);
  const MpccProblem prob = build_task(spec, goal);
  const Vec x0 = Vec::Zero(prob.x_dim());

  const SolveReport rep = run_solver(rm, spec, prob, x0);
  const TaskMetrics tm = evaluate_metrics(spec, rep, goal);

  fs::create_directories(rm.out_dir);
  write_report(rep, tm, rm.out_dir + "/report.txt");
  write_trajectory(spec, prob, rep, rm.out_dir + "/trajectory.csv");
  write_sweep_trace(rep.sweep_log, rm.out_dir + "/sweeps.csv");

  std::cout << "status=" << to_string(rep.status) << " sweeps=" << rep.total_sweeps
            << " comp_inf=" << format_double(rep.final_feasibility.comp_inf) << "\n";
  return rep.status == SolveStatus::kConverged ? 0 : 1;
}

int cmd_benchmark(const RunManifest& rm) {
  const TaskSpec spec = load_spec(rm);
  std::vector<MetricsRow> rows(rm.trials);
  parallel_for_trials(rm.trials, rm.jobs, [&](int trial) {
    const std::uint64_t seed = trial_seed(rm.seed, trial);
    const GoalSpec goal = sample_goal(spec, seed);
    const MpccProblem prob = build_task(spec, goal);
    const Vec x0 = Vec::Zero(prob.x_dim());
    const SolveReport rep = run_solver(rm, spec, prob, x0);
    rows[trial] = make_row(rm, spec, rep, goal, trial, seed);
  });

  fs::create_directories(rm.out_dir);
  write_metrics(rows, rm.out_dir + "/metrics.csv");
  write_trials(rows, rm.out_dir + "/trials.csv");
  write_aggregate({aggregate_rows(rows)}, rm.out_dir + "/aggregate.csv");

  const AggregateRow agg = aggregate_rows(rows);
  std::cout << rm.task << "/" << rm.solver << ": success=" << agg.success_rate
            << "% track_err=" << agg.track_err_mean << " sweeps=" << agg.sweeps_mean
            << " time_s=" << agg.time_mean_s << "\n";
  return 0;
}

int diagnostics_correlation(const RunManifest& rm) {
  const TaskSpec spec = load_spec(rm);
  const int n_solves = std::max(rm.trials, 10);

  struct Pair {
    double sqrt_dphi, gx;
  };
  std::vector<std::vector<Pair>> per_trial(n_solves);
  parallel_for_trials(n_solves, rm.jobs, [&](int trial) {
    const std::uint64_t seed = trial_seed(rm.seed, trial);
    const GoalSpec goal = sample_goal(spec, seed);
    const MpccProblem prob = build_task(spec, goal);
    Rng rng(seed ^ 0x5bf03635ULL);
    Vec x0(prob.x_dim());
    for (int i = 0; i < x0.size(); ++i) x0[i] = rng.uniform(-0.2, 0.2);
    RunManifest local = rm;
    const SolveReport rep = run_solver(local, spec, prob, x0);
    for (const auto& s : rep.sweep_log) {
      if (s.dphi > 0.0 && s.gx_inf > 0.0) {
        per_trial[trial].push_back({std::sqrt(s.dphi), s.gx_inf});
      }
    }
  });

  std::vector<double> lx, ly;
  fs::create_directories(rm.out_dir);
  std::ofstream pairs_out(rm.out_dir + "/correlation_pairs.csv");
  pairs_out << "trial,sqrt_dphi,gx_inf\n";
  for (int trial = 0; trial < n_solves; ++trial) {
    for (const auto& pr : per_trial[trial]) {
      pairs_out << trial << "," << format_double(pr.sqrt_dphi) << ","
                << format_double(pr.gx) << "\n";
      lx.push_back(std::log(pr.sqrt_dphi));
      ly.push_back(std::log(pr.gx));
    }
  }
  const auto n = static_cast<double>(lx.size());
  if (n < 3) {
    std::cerr << "diagnostics: too few inner-iteration pairs\n";
    return 1;
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    syy += (ly[i] - my) * (ly[i] - my);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double rho = sxy / std::sqrt(sxx * syy);
  const double exponent = sxy / sxx;
  const double c_fit = std::exp(my - exponent * mx);
  const double c_x = 1.0 / (c_fit * c_fit);

  std::ofstream sum(rm.out_dir + "/correlation_summary.txt");
  sum << "n_solves: " << n_solves << "\n";
  sum << "n_pairs: " << lx.size() << "\n";
  sum << "rho: " << format_double(rho) << "\n";
  sum << "exponent: " << format_double(exponent) << "\n";
  sum << "c: " << format_double(c_fit) << "\n";
  sum << "c_x: " << format_double(c_x) << "\n";
  std::cout << "correlation rho=" << rho << " exponent=" << exponent << " c=" << c_fit
            << "\n";
  return 0;
}

int diagnostics_toy_paths(const RunManifest& rm) {
  const TaskSpec spec = load_spec(rm);
  const GoalSpec goal = sample_goal(spec, rm.seed);
  const MpccProblem prob = build_task(spec, goal);
  const Vec x0 = Vec::Zero(prob.x_dim());
  fs::create_directories(rm.out_dir);

  for (const std::string solver : {"impact", "penalty"}) {
    std::ofstream out(rm.out_dir + "/paths_" + solver + ".csv");
    out << "outer,sweep,x1,x2,y,z,phi\n";
    RunManifest local = rm;
    local.solver = solver;
    auto hook = [&](const VerticalState& w, const SweepRecord& rec) {
      const bool has_slack = w.Y.size() > 0;
      out << rec.outer << "," << rec.sweep << "," << format_double(w.X[0]) << ","
          << format_double(w.X[1]) << "," << format_double(has_slack ? w.Y[0] : 0.0) << ","
          << format_double(has_slack ? w.Z[0] : 0.0) << "," << format_double(rec.phi_after)
          << "\n";
    };
    const SolveReport rep = run_solver(local, spec, prob, x0, hook);
    if (rep.status != SolveStatus::kConverged) {
      std::cerr << "diagnostics: " << solver << " failed on the toy problem\n";
      return 1;
    }
  }
  std::cout << "toy paths written to " << rm.out_dir << "\n";
  return 0;
}

int cmd_diagnostics(const RunManifest& rm) {
  if (rm.task == "push_t") return diagnostics_correlation(rm);
  if (rm.task == "toy_2d") return diagnostics_toy_paths(rm);
  std::cerr << "diagnostics: task must be push_t (correlation) or toy_2d (method paths)\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPCC trajectory-optimization solver and benchmark harness"};
  app.require_subcommand(1);

  RunManifest rm;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--task", rm.task, "push_box|push_t|cart_transport|toy_2d")->required();
    sub->add_option("--solver", rm.solver, "impact|penalty");
    sub->add_option("--trials", rm.trials, "trial count");
    sub->add_option("--seed", rm.seed, "base RNG seed");
    sub->add_option("--jobs", rm.jobs, "max concurrent trials");
    sub->add_option("--out", rm.out_dir, "output directory");
    sub->add_option("--config", rm.config_file, "task manifest overrides");
    sub->add_option("--rho-c", rm.rho_c, "squared-penalty weight (penalty solver)");
  };
  CLI::App* solve = app.add_subcommand("solve", "run a single solve");
  CLI::App* bench = app.add_subcommand("benchmark", "run a benchmark sweep");
  CLI::App* diag = app.add_subcommand("diagnostics", "run the diagnostics studies");
  add_common(solve);
  add_common(bench);
  add_common(diag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // Reject unknown ids before any computation or file output.
  if (!is_known_task(rm.task)) {
    std::cerr << "unknown task: " << rm.task << "\n";
    return 2;
  }
  if (rm.solver != "impact" && rm.solver != "penalty") {
    std::cerr << "unknown solver: " << rm.solver << "\n";
    return 2;
  }
  if (rm.trials < 1) {
    std::cerr << "trials must be >= 1\n";
    return 2;
  }
  if (rm.jobs < 1) {
    std::cerr << "jobs must be >= 1\n";
    return 2;
  }

  try {
    if (*solve) return cmd_solve(rm);
    if (*bench) return cmd_benchmark(rm);
    if (*diag) return cmd_diagnostics(rm);
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
