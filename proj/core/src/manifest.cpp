#include "cito/tasks.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cito {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Manifest task_manifest(const TaskSpec& s) {
  Manifest m;
  m["id"] = s.id;
  m["dt"] = fmt(s.dt);
  m["horizon"] = std::to_string(s.horizon);
  m["mass"] = fmt(s.mass);
  m["mass2"] = fmt(s.mass2);
  m["gravity"] = fmt(s.gravity);
  m["friction"] = fmt(s.friction);
  m["length_a"] = fmt(s.length_a);
  m["length_b"] = fmt(s.length_b);
  m["stage_weight"] = fmt(s.stage_weight);
  m["final_weight"] = fmt(s.final_weight);
  m["n_q"] = std::to_string(s.n_q);
  m["n_u"] = std::to_string(s.n_u);
  m["n_c"] = std::to_string(s.n_c);
  m["n_e"] = std::to_string(s.n_e);
  m["n_i"] = std::to_string(s.n_i);
  m["char_radius"] = fmt(s.char_radius);
  m["slide_speed"] = fmt(s.slide_speed);
  m["force_max"] = fmt(s.force_max);
  m["dyn_row_scale"] = fmt(s.dyn_row_scale);
  m["slip_vel_scale"] = fmt(s.slip_vel_scale);
  m["fric_row_scale"] = fmt(s.fric_row_scale);
  m["slip_eq_scale"] = fmt(s.slip_eq_scale);
  m["workspace_bound"] = fmt(s.workspace_bound);
  m["sample_len"] = fmt(s.sample_len);
  m["multiplier_safeguard"] = fmt(s.multiplier_safeguard);
  m["rho_scale"] = fmt(s.rho_scale);
  m["rho_init"] = fmt(s.rho_init);
  m["rho_cap"] = fmt(s.rho_cap);
  m["eta"] = fmt(s.eta);
  m["max_outer"] = std::to_string(s.max_outer);
  m["outer_tol_h"] = fmt(s.outer_tol_h);
  m["outer_tol_comp"] = fmt(s.outer_tol_comp);
  m["outer_tol_w"] = fmt(s.outer_tol_w);
  m["max_inner"] = std::to_string(s.max_inner);
  m["inner_tol"] = fmt(s.inner_tol);
  m["gn_max_iters"] = std::to_string(s.gn_max_iters);
  m["gn_step_tol"] = fmt(s.gn_step_tol);
  m["gn_reg"] = fmt(s.gn_reg);
  return m;
}

TaskSpec apply_manifest(TaskSpec s, const Manifest& overrides) {
  for (const auto& [key, raw] : overrides) {
    const std::string value = trim(raw);
    auto d = [&] { return std::stod(value); };
    auto i = [&] { return std::stoi(value); };
    if (key == "id") s.id = value;
    else if (key == "dt") s.dt = d();
    else if (key == "horizon") s.horizon = i();
    else if (key == "mass") s.mass = d();
    else if (key == "mass2") s.mass2 = d();
    else if (key == "gravity") s.gravity = d();
    else if (key == "friction") s.friction = d();
    else if (key == "length_a") s.length_a = d();
    else if (key == "length_b") s.length_b = d();
    else if (key == "stage_weight") s.stage_weight = d();
    else if (key == "final_weight") s.final_weight = d();
    else if (key == "n_q") s.n_q = i();
    else if (key == "n_u") s.n_u = i();
    else if (key == "n_c") s.n_c = i();
    else if (key == "n_e") s.n_e = i();
    else if (key == "n_i") s.n_i = i();
    else if (key == "char_radius") s.char_radius = d();
    else if (key == "slide_speed") s.slide_speed = d();
    else if (key == "force_max") s.force_max = d();
    else if (key == "dyn_row_scale") s.dyn_row_scale = d();
    else if (key == "slip_vel_scale") s.slip_vel_scale = d();
    else if (key == "fric_row_scale") s.fric_row_scale = d();
    else if (key == "slip_eq_scale") s.slip_eq_scale = d();
    else if (key == "workspace_bound") s.workspace_bound = d();
    else if (key == "sample_len") s.sample_len = d();
    else if (key == "multiplier_safeguard") s.multiplier_safeguard = d();
    else if (key == "rho_scale") s.rho_scale = d();
    else if (key == "rho_init") s.rho_init = d();
    else if (key == "rho_cap") s.rho_cap = d();
    else if (key == "eta") s.eta = d();
    else if (key == "max_outer") s.max_outer = i();
    else if (key == "outer_tol_h") s.outer_tol_h = d();
    else if (key == "outer_tol_comp") s.outer_tol_comp = d();
    else if (key == "outer_tol_w") s.outer_tol_w = d();
    else if (key == "max_inner") s.max_inner = i();
    else if (key == "inner_tol") s.inner_tol = d();
    else if (key == "gn_max_iters") s.gn_max_iters = i();
    else if (key == "gn_step_tol") s.gn_step_tol = d();
    else if (key == "gn_reg") s.gn_reg = d();
    else throw ConfigurationError("manifest: unknown key '" + key + "'");
  }
  return s;
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("manifest: cannot open " + path);
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError("manifest: malformed line '" + line + "' in " + path);
    }
    m[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return m;
}

void write_manifest(const Manifest& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("manifest: cannot write " + path);
  for (const auto& [key, value] : m) {
    out << key << " = " << value << "\n";
  }
}

}  // namespace cito
