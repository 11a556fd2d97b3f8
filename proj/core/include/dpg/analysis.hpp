#pragma once

#include "dpg/assembly.hpp"

namespace dpg {

/// Discrete quotient-norm surrogate for the trace variable: Schur complement
/// of the H(b;Omega)-Gram matrix of the continuous P_m space (inflow nodes
/// eliminated) over the non-trace dofs, i.e. the minimal discrete extension
/// norm. Conforming trace mode only.
Eigen::MatrixXd theta_norm_surrogate(const TriMesh& meshH, const TransportProblem& problem,
                                     const TrialSpace& trial, int quad_degree);

/// Trial-space norm matrix: L2 mass on the u block plus the trace surrogate.
Eigen::MatrixXd trial_mass(const TriMesh& meshH, const TransportProblem& problem,
                           const TrialSpace& trial, int quad_degree);

/// gamma = sqrt(lambda_min) of the generalized symmetric eigenproblem
/// (B^T G^{-1} B) x = lambda M_U x; dense solve, inputs over 5000 trial dofs
/// are rejected.
double infsup_gamma_from_matrices(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M);

double infsup_gamma(const NormalSystem& sys, const TriMesh& meshH,
                    const TransportProblem& problem, const TrialSpace& trial, int quad_degree);

struct StabilityRow {
  double h = 0;
  int ell = 0, m = 1;
  double gamma = 0;
  double ratio = 0;  // ||u - u^H|| / best approximation error
};

/// Stability/quasi-optimality sweep over structured-mesh levels
/// h = 2^-2 .. 2^-kmax at fixed subgrid depth.
std::vector<StabilityRow> stability_sweep(const TransportProblem& problem, int kmax, int m,
                                          int ell, int quad_degree, double solver_tol);

}  // namespace dpg
