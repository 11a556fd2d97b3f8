#include "dpg/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "dpg/quadrature.hpp"

namespace dpg {

namespace {

constexpr int kDenseLimit = 5000;

// Global continuous P_m node id: vertices, then edge-interior nodes, then
// per-element interior nodes (free extension dofs).
struct ContinuousNodes {
  int m;
  int n_vertex, n_edge_nodes, n_interior;
  int total;

  explicit ContinuousNodes(const TriMesh& mesh, int m_)
      : m(m_),
        n_vertex(mesh.n_vertices()),
        n_edge_nodes(mesh.n_edges() * (m_ - 1)),
        n_interior(mesh.n_triangles() * (m_ - 1) * (m_ - 2) / 2),
        total(n_vertex + n_edge_nodes + n_interior) {}
};

}  // namespace

Eigen::MatrixXd theta_norm_surrogate(const TriMesh& meshH, const TransportProblem& problem,
                                     const TrialSpace& trial, int quad_degree) {
  if (trial.mode != TraceMode::conforming)
    throw std::invalid_argument(
        "theta_norm_surrogate: unsupported for nonconforming traces (no conforming extension)");
  const int m = trial.m;
  const ContinuousNodes cn(meshH, m);
  const NodalBasis nb = nodal_basis(m);
  const QuadRule rule = triangle_rule(std::min(quad_degree > 0 ? quad_degree : 2 * (m + 2), 10));
  const BasisEval ev = evaluate_basis(nb.funcs, rule.points);

  // Nodes on the inflow closure are fixed at zero in every admissible
  // extension; everything else is either a theta dof or a free extension dof.
  std::vector<char> on_inflow(static_cast<size_t>(cn.n_vertex + cn.n_edge_nodes), 0);
  {
    const CellData cd = cell_averages(problem, meshH, quad_degree > 0 ? quad_degree : 2 * (m + 2));
    const EdgeClass cls = classify_edges(meshH, cd.bbar);
    for (int e = 0; e < meshH.n_edges(); ++e) {
      const MeshEdge& me = meshH.edges()[static_cast<size_t>(e)];
      if (!me.boundary()) continue;
      const auto& tv = meshH.triangles[static_cast<size_t>(me.tri[0])].v;
      bool inflow = false;
      for (int le = 0; le < 3; ++le) {
        const int a = tv[static_cast<size_t>(le)], b = tv[static_cast<size_t>((le + 1) % 3)];
        if ((a == me.a && b == me.b) || (a == me.b && b == me.a))
          inflow = cls.side_label(me.tri[0], le) == EdgeLabel::inflow;
      }
      if (!inflow) continue;
      on_inflow[static_cast<size_t>(me.a)] = 1;
      on_inflow[static_cast<size_t>(me.b)] = 1;
      for (int k = 1; k < m; ++k)
        on_inflow[static_cast<size_t>(cn.n_vertex + e * (m - 1) + (k - 1))] = 1;
    }
  }
  // Column map: theta dofs keep their trace indices, free extension dofs
  // follow, eliminated (inflow) nodes get -1.
  std::vector<int> col(static_cast<size_t>(cn.total), -1);
  int next = trial.n_theta;
  for (int nd = 0; nd < cn.total; ++nd) {
    const bool skeleton_node = nd < cn.n_vertex + cn.n_edge_nodes;
    const int tdof = skeleton_node ? trial.node_dof[static_cast<size_t>(nd)] : -1;
    if (tdof >= 0)
      col[static_cast<size_t>(nd)] = tdof;
    else if (!skeleton_node || !on_inflow[static_cast<size_t>(nd)])
      col[static_cast<size_t>(nd)] = next++;
  }
  const int n_all = next;
  const int n_theta = trial.n_theta;

  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n_all, n_all);
  const int nfun = static_cast<int>(nb.funcs.size());
  for (int k = 0; k < meshH.n_triangles(); ++k) {
    const Tri K = meshH.tri_geometry(k);
    const AffineMap F(K);
    const double jac = std::abs(F.det());
    const auto& tv = meshH.triangles[static_cast<size_t>(k)].v;
    // local node -> global continuous node
    std::vector<int> gnode(static_cast<size_t>(nfun));
    for (int v = 0; v < 3; ++v) gnode[static_cast<size_t>(nb.vertex_node(v))] = tv[static_cast<size_t>(v)];
    for (int e = 0; e < 3; ++e) {
      const int a = tv[static_cast<size_t>(e)], b = tv[static_cast<size_t>((e + 1) % 3)];
      const int ge = meshH.edge_index(a, b);
      const bool rev = a > b;
      for (int kk = 1; kk < m; ++kk)
        gnode[static_cast<size_t>(nb.edge_node(e, kk))] =
            cn.n_vertex + ge * (m - 1) + ((rev ? m - kk : kk) - 1);
    }
    const int nint = (m - 1) * (m - 2) / 2;
    for (int i = 0; i < nint; ++i)
      gnode[static_cast<size_t>(nb.interior_node(i))] = cn.n_vertex + cn.n_edge_nodes + k * nint + i;

    Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(nfun, nfun);
    Eigen::VectorXd bd(nfun);
    for (size_t q = 0; q < rule.size(); ++q) {
      const Point2 x = F.apply(rule.points[q]);
      const Point2 b = problem.b(x);
      for (int i = 0; i < nfun; ++i)
        bd(i) = dot(b, F.push_gradient({ev.dx(static_cast<int>(q), i), ev.dy(static_cast<int>(q), i)}));
      const double wq = rule.weights[q] * jac;
      for (int i = 0; i < nfun; ++i)
        for (int j = 0; j < nfun; ++j)
          loc(i, j) += wq * (ev.val(static_cast<int>(q), i) * ev.val(static_cast<int>(q), j) +
                             bd(i) * bd(j));
    }
    for (int i = 0; i < nfun; ++i) {
      const int ci = col[static_cast<size_t>(gnode[static_cast<size_t>(i)])];
      if (ci < 0) continue;
      for (int j = 0; j < nfun; ++j) {
        const int cj = col[static_cast<size_t>(gnode[static_cast<size_t>(j)])];
        if (cj >= 0) N(ci, cj) += loc(i, j);
      }
    }
  }

  const int n_free = n_all - n_theta;
  if (n_free == 0) return N;
  const Eigen::MatrixXd Ntt = N.topLeftCorner(n_theta, n_theta);
  const Eigen::MatrixXd Ntf = N.topRightCorner(n_theta, n_free);
  const Eigen::MatrixXd Nff = N.bottomRightCorner(n_free, n_free);
  return Ntt - Ntf * Eigen::LLT<Eigen::MatrixXd>(Nff).solve(Ntf.transpose());
}

Eigen::MatrixXd trial_mass(const TriMesh& meshH, const TransportProblem& problem,
                           const TrialSpace& trial, int quad_degree) {
  const int n = trial.total_dim();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < meshH.n_triangles(); ++k) {
    const double mass = 2.0 * meshH.tri_geometry(k).area();
    for (int i = 0; i < trial.u_block; ++i) M(trial.u_dof(k, i), trial.u_dof(k, i)) = mass;
  }
  if (trial.n_theta > 0)
    M.bottomRightCorner(trial.n_theta, trial.n_theta) =
        theta_norm_surrogate(meshH, problem, trial, quad_degree);
  return M;
}

double infsup_gamma_from_matrices(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
  if (A.rows() > kDenseLimit)
    throw std::invalid_argument("infsup_gamma: dense eigensolve limited to 5000 trial dofs");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A, M, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("infsup_gamma: generalized eigensolve failed (singular norm matrix?)");
  return std::sqrt(std::max(0.0, ges.eigenvalues()(0)));
}

double infsup_gamma(const NormalSystem& sys, const TriMesh& meshH,
                    const TransportProblem& problem, const TrialSpace& trial, int quad_degree) {
  return infsup_gamma_from_matrices(Eigen::MatrixXd(sys.A),
                                    trial_mass(meshH, problem, trial, quad_degree));
}

std::vector<StabilityRow> stability_sweep(const TransportProblem& problem, int kmax, int m,
                                          int ell, int quad_degree, double solver_tol) {
  std::vector<StabilityRow> rows;
  for (int k = 2; k <= kmax; ++k) {
    const int n = 1 << k;
    TriMesh meshH = build_structured_mesh(n);
    auto [meshh, refmap] = red_refine(meshH, ell);
    const CellData cd = cell_averages(problem, meshH, quad_degree > 0 ? quad_degree : 2 * (m + 2));
    const EdgeClass cls = classify_edges(meshH, cd.bbar);
    const TrialSpace trial = build_trial_space(meshH, cls, m, TraceMode::conforming);
    const TestSpace test = build_test_space(meshh, m + 1);
    const DpgWorkspace ws(meshH, meshh, refmap, problem, trial, test, quad_degree);
    const NormalSystem sys = assemble(ws);
    StabilityRow row;
    row.h = 1.0 / n;
    row.ell = ell;
    row.m = m;
    row.gamma = infsup_gamma(sys, meshH, problem, trial, ws.quad_degree);
    if (problem.exact_u) {
      const Solution sol = solve(sys, solver_tol);
      const double err = l2_error_u(sol, problem, meshH, trial, ws.quad_degree);
      const double best = best_approx_error(problem, meshH, m - 1, ws.quad_degree);
      row.ratio = best > 0 ? err / best : 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dpg
