#pragma once

#include <Eigen/Sparse>

#include "dpg/localdpg.hpp"

namespace dpg {

/// Retained element-local pieces of the normal-equation assembly; the
/// estimator reuses them for the residual Riesz lift.
struct MacroBlock {
  LocalB b;
  std::vector<LocalGram> grams;
};

/// Sparse SPD system B^T G^{-1} B x = B^T G^{-1} f over the trial dofs.
struct NormalSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd rhs;
  std::vector<MacroBlock> blocks;  // indexed by macro element
  int n_u = 0, n_theta = 0;
  int test_block = 0;
  int n_cells = 0;
};

NormalSystem assemble(const DpgWorkspace& ws);

/// Right-hand-side contribution of the inhomogeneous inflow data: propagates
/// -int over the skeleton of [[v b]] g_bar through G^{-1} exactly as the
/// assembly does. Requires problem.g_bar.
Eigen::VectorXd inhomogeneous_rhs(const DpgWorkspace& ws);

struct Solution {
  Eigen::VectorXd x;
  int iterations = 0;    // 0 when the direct solver was used
  double residual = 0;   // relative residual of the linear solve
};

/// Sparse Cholesky (AMD ordering) with a conjugate-gradient fallback for
/// large systems; throws when the matrix is not positive definite.
Solution solve(const NormalSystem& sys, double tol = 1e-10);

/// sqrt of sum_K' int (u_exact - u^H)^2 with split quadrature across the
/// declared interfaces of the exact solution.
double l2_error_u(const Solution& sol, const TransportProblem& problem, const TriMesh& meshH,
                  const TrialSpace& trial, int quad_degree);

/// L2 distance from the exact solution to its elementwise L2 projection onto
/// P_degree.
double best_approx_error(const TransportProblem& problem, const TriMesh& meshH, int degree,
                         int quad_degree);

}  // namespace dpg
