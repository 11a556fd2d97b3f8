#pragma once

#include <string>
#include <vector>

#include "dpg/analysis.hpp"
#include "dpg/estimator.hpp"

namespace dpg {

/// Experiment configuration: flat key=value file with CLI overrides.
struct RunConfig {
  std::string experiment = "exp1";  // exp1 | exp2 | exp3 | custom
  double bx = 1.0, by = 1.0;
  int m = 1;
  int subgrid = 0;  // ell; the stability runner sweeps 0..subgrid
  std::string trace_mode = "conforming";  // conforming | nonconforming | both
  int levels = 5;   // k_max: structured meshes h = 2^-2 .. 2^-k_max
  int iters = 10;   // adaptive iterations
  double theta = 0.5;
  std::string out;  // output path; empty -> stdout
  int quad_degree = 0;  // 0 -> per-module default 2(m+2)
  double solver_tol = 1e-10;
  bool export_meshes = false;
};

RunConfig parse_config_file(const std::string& path);
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);
void validate(const RunConfig& cfg);

TransportProblem make_problem(const RunConfig& cfg);

/// 17-significant-digit CSV number formatting ('.' decimal, C locale).
std::string fmt17(double v);

/// Convergence study rows (h, dofs, l2_error, best_approx_error, ratio) for
/// one trace mode.
std::string convergence_csv(const RunConfig& cfg, TraceMode mode);

/// AFEM rows (iteration, triangles, dofs, l2_error, total_indicator).
std::string adaptive_csv(const RunConfig& cfg, std::vector<AfemRecord>* records = nullptr);

/// Stability rows (h, l, m, gamma, ratio) sweeping l = 0..subgrid.
std::string stability_csv(const RunConfig& cfg);

/// Subcommand entry points: write the requested outputs, return 0 on
/// success; failures surface as exceptions.
int run_convergence(const RunConfig& cfg);
int run_adaptive(const RunConfig& cfg);
int run_stability(const RunConfig& cfg);

}  // namespace dpg
