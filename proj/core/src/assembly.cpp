#include "dpg/assembly.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dpg/parallel.hpp"
#include "dpg/quadrature.hpp"

namespace dpg {

namespace {

// Above this size the iterative fallback replaces the direct factorization.
constexpr int kCgThreshold = 400000;

void build_blocks(const DpgWorkspace& ws, LoadParts parts, std::vector<MacroBlock>& blocks) {
  const int n_macro = ws.meshH.n_triangles();
  blocks.resize(static_cast<size_t>(n_macro));
  parallel_for(n_macro, [&](int k) {
    blocks[static_cast<size_t>(k)].b = local_bform(ws, k, parts);
    blocks[static_cast<size_t>(k)].grams = local_grams(ws, k);
  });
}

}  // namespace

NormalSystem assemble(const DpgWorkspace& ws) {
  NormalSystem sys;
  sys.n_u = ws.trial.n_u;
  sys.n_theta = ws.trial.n_theta;
  sys.test_block = ws.test.block;
  sys.n_cells = ws.test.n_cells;
  build_blocks(ws, LoadParts::full, sys.blocks);

  const int n = ws.trial.total_dim();
  sys.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trips;
  // Deterministic serial scatter in macro-element order.
  for (const MacroBlock& mb : sys.blocks) {
    const Eigen::MatrixXd T = trial_to_test(mb.grams, mb.b);  // G^{-1} B
    const Eigen::MatrixXd Aloc = mb.b.B.transpose() * T;
    const Eigen::VectorXd rloc = T.transpose() * mb.b.load;
    const auto& dofs = mb.b.trial_dofs;
    for (size_t i = 0; i < dofs.size(); ++i) {
      sys.rhs(dofs[i]) += rloc(static_cast<int>(i));
      for (size_t j = 0; j < dofs.size(); ++j)
        trips.emplace_back(dofs[i], dofs[j], Aloc(static_cast<int>(i), static_cast<int>(j)));
    }
  }
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.A.makeCompressed();
  return sys;
}

Eigen::VectorXd inhomogeneous_rhs(const DpgWorkspace& ws) {
  if (!ws.problem.g_bar.has_value())
    throw std::invalid_argument("inhomogeneous_rhs: problem carries no g_bar extension");
  std::vector<MacroBlock> blocks;
  build_blocks(ws, LoadParts::gbar_only, blocks);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ws.trial.total_dim());
  for (const MacroBlock& mb : blocks) {
    const Eigen::MatrixXd T = trial_to_test(mb.grams, mb.b);
    const Eigen::VectorXd rloc = T.transpose() * mb.b.load;
    for (size_t i = 0; i < mb.b.trial_dofs.size(); ++i)
      rhs(mb.b.trial_dofs[i]) += rloc(static_cast<int>(i));
  }
  return rhs;
}

Solution solve(const NormalSystem& sys, double tol) {
  Solution sol;
  const double rhs_norm = sys.rhs.norm();
  if (rhs_norm == 0) {
    sol.x = Eigen::VectorXd::Zero(sys.A.rows());
    return sol;
  }
  if (sys.A.rows() > kCgThreshold) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg(sys.A);
    cg.setTolerance(tol);
    sol.x = cg.solve(sys.rhs);
    sol.iterations = static_cast<int>(cg.iterations());
    sol.residual = (sys.A * sol.x - sys.rhs).norm() / rhs_norm;
    if (cg.info() != Eigen::Success)
      throw std::runtime_error("solve: conjugate gradients failed to converge");
    return sol;
  }
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys.A);
  if (llt.info() != Eigen::Success) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys.A);
    double pivot = std::numeric_limits<double>::quiet_NaN();
    if (ldlt.info() == Eigen::Success) pivot = ldlt.vectorD().minCoeff();
    throw std::runtime_error("solve: matrix not positive definite (smallest pivot " +
                             std::to_string(pivot) + ")");
  }
  sol.x = llt.solve(sys.rhs);
  for (int sweep = 0; sweep < 2; ++sweep) {
    const Eigen::VectorXd r = sys.rhs - sys.A * sol.x;
    sol.residual = r.norm() / rhs_norm;
    if (sol.residual <= tol) return sol;
    sol.x += llt.solve(r);
  }
  sol.residual = (sys.rhs - sys.A * sol.x).norm() / rhs_norm;
  if (sol.residual > tol)
    throw std::runtime_error("solve: direct solve stalled at relative residual " +
                             std::to_string(sol.residual));
  return sol;
}

double l2_error_u(const Solution& sol, const TransportProblem& problem, const TriMesh& meshH,
                  const TrialSpace& trial, int quad_degree) {
  if (!problem.exact_u.has_value())
    throw std::invalid_argument("l2_error_u: problem has no exact solution");
  const std::vector<Poly2> basis = reference_basis(trial.m - 1);
  const QuadRule rule = triangle_rule(std::min(quad_degree > 0 ? quad_degree : 2 * (trial.m + 2), 10));
  double err2 = 0;
  for (int k = 0; k < meshH.n_triangles(); ++k) {
    const Tri K = meshH.tri_geometry(k);
    const AffineMap F(K);
    auto diff2 = [&](const Point2& x) {
      const Point2 xr = F.invert(x);
      double uh = 0;
      for (size_t i = 0; i < basis.size(); ++i)
        uh += sol.x(trial.u_dof(k, static_cast<int>(i))) * basis[i].eval(xr);
      const double d = problem.exact_u->eval(x) - uh;
      return d * d;
    };
    err2 += integrate_split(diff2, K, rule, problem.exact_u->interfaces);
  }
  return std::sqrt(err2);
}

double best_approx_error(const TransportProblem& problem, const TriMesh& meshH, int degree,
                         int quad_degree) {
  if (!problem.exact_u.has_value())
    throw std::invalid_argument("best_approx_error: problem has no exact solution");
  const std::vector<Poly2> basis = reference_basis(degree);
  const QuadRule rule = triangle_rule(std::min(quad_degree > 0 ? quad_degree : 2 * (degree + 3), 10));
  const auto& itf = problem.exact_u->interfaces;
  double err2 = 0;
  for (int k = 0; k < meshH.n_triangles(); ++k) {
    const Tri K = meshH.tri_geometry(k);
    const AffineMap F(K);
    const double mass = 2.0 * K.area();  // reference-orthonormal basis
    const double uu = integrate_split(
        [&](const Point2& x) {
          const double u = problem.exact_u->eval(x);
          return u * u;
        },
        K, rule, itf);
    double proj2 = 0;
    for (const Poly2& phi : basis) {
      const double c = integrate_split(
          [&](const Point2& x) { return problem.exact_u->eval(x) * phi.eval(F.invert(x)); }, K,
          rule, itf);
      proj2 += c * c / mass;
    }
    err2 += std::max(0.0, uu - proj2);
  }
  return std::sqrt(err2);
}

}  // namespace dpg
