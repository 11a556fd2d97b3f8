#include "dpg/runner.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace dpg {

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file " + path);
  os << payload;
  if (!os) throw std::runtime_error("write failed for " + path);
}

std::string suffixed(const std::string& path, const std::string& suffix) {
  const size_t dot = path.find_last_of('.');
  const size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

struct LevelResult {
  double h = 0;
  int dofs = 0;
  double err = 0, best = 0;
};

LevelResult solve_level(const RunConfig& cfg, const TransportProblem& problem, int k,
                        TraceMode mode, int ell) {
  const int n = 1 << k;
  TriMesh meshH = build_structured_mesh(n);
  auto [meshh, refmap] = red_refine(meshH, ell);
  const CellData cd =
      cell_averages(problem, meshH, cfg.quad_degree > 0 ? cfg.quad_degree : 2 * (cfg.m + 2));
  const EdgeClass cls = classify_edges(meshH, cd.bbar);
  const TrialSpace trial = build_trial_space(meshH, cls, cfg.m, mode);
  const TestSpace test = build_test_space(meshh, cfg.m + 1);
  const DpgWorkspace ws(meshH, meshh, refmap, problem, trial, test, cfg.quad_degree);
  const NormalSystem sys = assemble(ws);
  const Solution sol = solve(sys, cfg.solver_tol);
  LevelResult r;
  r.h = 1.0 / n;
  r.dofs = trial.total_dim();
  r.err = l2_error_u(sol, problem, meshH, trial, ws.quad_degree);
  r.best = best_approx_error(problem, meshH, cfg.m - 1, ws.quad_degree);
  return r;
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto as_int = [&] { return std::stoi(value); };
  auto as_double = [&] { return std::stod(value); };
  if (key == "experiment") cfg.experiment = value;
  else if (key == "bx") cfg.bx = as_double();
  else if (key == "by") cfg.by = as_double();
  else if (key == "m") cfg.m = as_int();
  else if (key == "subgrid") cfg.subgrid = as_int();
  else if (key == "trace_mode") cfg.trace_mode = value;
  else if (key == "levels") cfg.levels = as_int();
  else if (key == "iters") cfg.iters = as_int();
  else if (key == "theta") cfg.theta = as_double();
  else if (key == "out") cfg.out = value;
  else if (key == "quad_degree") cfg.quad_degree = as_int();
  else if (key == "solver_tol") cfg.solver_tol = as_double();
  else if (key == "export_meshes") cfg.export_meshes = value == "1" || value == "true";
  else throw std::runtime_error("unknown config key '" + key + "'");
}

void validate(const RunConfig& cfg) {
  if (cfg.experiment != "exp1" && cfg.experiment != "exp2" && cfg.experiment != "exp3" &&
      cfg.experiment != "custom")
    throw std::invalid_argument("experiment must be exp1|exp2|exp3|custom");
  if (cfg.m < 1 || cfg.m > 3) throw std::invalid_argument("m must be in 1..3");
  if (cfg.subgrid < 0 || cfg.subgrid > 4) throw std::invalid_argument("subgrid must be in 0..4");
  if (cfg.trace_mode != "conforming" && cfg.trace_mode != "nonconforming" &&
      cfg.trace_mode != "both")
    throw std::invalid_argument("trace_mode must be conforming|nonconforming|both");
  if (cfg.trace_mode != "conforming" && cfg.subgrid > 0)
    throw std::invalid_argument("nonconforming traces require subgrid = 0");
  if (cfg.levels < 2 || cfg.levels > 8) throw std::invalid_argument("levels must be in 2..8");
  if (cfg.iters < 0 || cfg.iters > 60) throw std::invalid_argument("iters must be in 0..60");
  if (!(cfg.theta > 0) || cfg.theta > 1) throw std::invalid_argument("theta must be in (0,1]");
  if (!(cfg.solver_tol > 0)) throw std::invalid_argument("solver_tol must be positive");
  if (cfg.quad_degree < 0 || cfg.quad_degree > 10)
    throw std::invalid_argument("quad_degree must be in 0..10");
  if (cfg.experiment != "exp3" && (!(cfg.bx > 0) || cfg.by < 0))
    throw std::invalid_argument("constant-field experiments require bx > 0 and by >= 0");
}

TransportProblem make_problem(const RunConfig& cfg) {
  if (cfg.experiment == "exp2") return benchmark_exp2({cfg.bx, cfg.by});
  if (cfg.experiment == "exp3") return benchmark_exp3();
  return benchmark_exp1({cfg.bx, cfg.by});  // exp1 and custom
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string convergence_csv(const RunConfig& cfg, TraceMode mode) {
  const TransportProblem problem = make_problem(cfg);
  std::ostringstream os;
  os << "h,dofs,l2_error,best_approx_error,ratio\n";
  for (int k = 2; k <= cfg.levels; ++k) {
    const LevelResult r = solve_level(cfg, problem, k, mode, cfg.subgrid);
    os << fmt17(r.h) << "," << r.dofs << "," << fmt17(r.err) << "," << fmt17(r.best) << ","
       << fmt17(r.best > 0 ? r.err / r.best : 0.0) << "\n";
  }
  return os.str();
}

std::string adaptive_csv(const RunConfig& cfg, std::vector<AfemRecord>* records) {
  const TransportProblem problem = make_problem(cfg);
  const TraceMode mode =
      cfg.trace_mode == "nonconforming" ? TraceMode::nonconforming : TraceMode::conforming;
  std::vector<AfemRecord> recs =
      afem_loop(problem, build_structured_mesh(4), cfg.iters, cfg.theta, cfg.m, cfg.subgrid, mode,
                cfg.quad_degree, cfg.solver_tol);
  std::ostringstream os;
  os << "iteration,triangles,dofs,l2_error,total_indicator\n";
  for (const AfemRecord& r : recs)
    os << r.iteration << "," << r.n_triangles << "," << r.n_dofs << "," << fmt17(r.l2_error) << ","
       << fmt17(r.total_indicator) << "\n";
  if (records) *records = std::move(recs);
  return os.str();
}

std::string stability_csv(const RunConfig& cfg) {
  const TransportProblem problem = make_problem(cfg);
  std::ostringstream os;
  os << "h,l,m,gamma,ratio\n";
  for (int ell = 0; ell <= cfg.subgrid; ++ell)
    for (const StabilityRow& r :
         stability_sweep(problem, cfg.levels, cfg.m, ell, cfg.quad_degree, cfg.solver_tol))
      os << fmt17(r.h) << "," << r.ell << "," << r.m << "," << fmt17(r.gamma) << ","
         << fmt17(r.ratio) << "\n";
  return os.str();
}

int run_convergence(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.experiment == "exp3")
    throw std::invalid_argument("run_convergence expects an exp1/exp2/custom configuration");
  if (cfg.trace_mode == "both") {
    const std::string conf = convergence_csv(cfg, TraceMode::conforming);
    const std::string nonconf = convergence_csv(cfg, TraceMode::nonconforming);
    if (cfg.out.empty()) {
      std::cout << conf << "\n" << nonconf;
    } else {
      write_output(suffixed(cfg.out, "_conforming"), conf);
      write_output(suffixed(cfg.out, "_nonconforming"), nonconf);
    }
    return 0;
  }
  const TraceMode mode =
      cfg.trace_mode == "nonconforming" ? TraceMode::nonconforming : TraceMode::conforming;
  write_output(cfg.out, convergence_csv(cfg, mode));
  return 0;
}

int run_adaptive(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.experiment != "exp3")
    throw std::invalid_argument("run_adaptive expects an exp3 configuration");
  std::vector<AfemRecord> recs;
  const std::string csv = adaptive_csv(cfg, &recs);
  write_output(cfg.out, csv);
  if (cfg.export_meshes && !cfg.out.empty()) {
    for (const AfemRecord& r : recs) {
      char name[32];
      std::snprintf(name, sizeof name, ".iter%02d.mesh", r.iteration);
      export_mesh(r.mesh, cfg.out + name);
    }
  }
  return 0;
}

int run_stability(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.experiment == "exp3")
    throw std::invalid_argument("run_stability expects a constant-field configuration");
  if (cfg.trace_mode == "nonconforming")
    throw std::invalid_argument(
        "run_stability requires conforming traces (the trace-norm surrogate needs a conforming "
        "extension)");
  write_output(cfg.out, stability_csv(cfg));
  return 0;
}

}  // namespace dpg
