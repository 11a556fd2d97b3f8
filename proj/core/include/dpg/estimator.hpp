#pragma once

#include <set>

#include "dpg/assembly.hpp"

namespace dpg {

/// Squared H(b;.)-norms of the residual lift, aggregated per macro element.
struct Indicators {
  std::vector<double> eta2;
  double total = 0;
};

/// Riesz lift of the discrete residual into the broken test space: per
/// subgrid cell, solves G_K r_K = load_K - B_K x_local.
Eigen::VectorXd residual_representation(const NormalSystem& sys, const Solution& sol);

Indicators local_indicators(const Eigen::VectorXd& rtilde, const NormalSystem& sys);

/// Greedy largest-first minimal prefix carrying the fraction theta of the
/// total squared indicator; ties broken by element id.
std::set<int> dorfler_mark(const Indicators& ind, double theta);

struct AfemRecord {
  int iteration = 0;
  int n_triangles = 0;
  int n_dofs = 0;
  double l2_error = 0;  // NaN when no exact solution is available
  double total_indicator = 0;
  std::set<int> marked;  // empty on the final record
  TriMesh mesh;          // mesh of this iteration
};

/// solve -> estimate -> mark -> bisect, emitting one record per iterate
/// (iterations+1 records). The subgrid is regenerated at fixed depth ell
/// after each refinement.
std::vector<AfemRecord> afem_loop(const TransportProblem& problem, TriMesh mesh, int iterations,
                                  double theta, int m, int ell,
                                  TraceMode mode = TraceMode::conforming, int quad_degree = 0,
                                  double solver_tol = 1e-10);

}  // namespace dpg
