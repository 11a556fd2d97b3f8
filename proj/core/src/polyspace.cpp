#include "dpg/polyspace.hpp"

#include <stdexcept>

#include "dpg/quadrature.hpp"

namespace dpg {

namespace {

std::vector<Poly2> monomials(int degree) {
  std::vector<Poly2> ms;
  for (int t = 0; t <= degree; ++t)
    for (int j = 0; j <= t; ++j) {
      Poly2 p(t);
      p.at(t - j, j) = 1.0;
      ms.push_back(p);
    }
  return ms;
}

// One Gram-Schmidt pass: returns L^{-1} * basis for the Cholesky factor L of
// the exact Gram matrix.
std::vector<Poly2> orthonormalize(const std::vector<Poly2>& basis) {
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = (basis[static_cast<size_t>(i)] * basis[static_cast<size_t>(j)]).integral_ref();
  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(M).matrixL();
  const Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
  std::vector<Poly2> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Poly2 q(0);
    for (int j = 0; j <= i; ++j) q += C(i, j) * basis[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = q.trimmed();
  }
  return out;
}

}  // namespace

std::vector<Poly2> reference_basis(int degree) {
  if (degree < 0 || degree > 6)
    throw std::invalid_argument("reference_basis: degree must be in 0..6");
  return orthonormalize(orthonormalize(monomials(degree)));
}

BasisEval evaluate_basis(const std::vector<Poly2>& basis, const std::vector<Point2>& pts) {
  BasisEval ev;
  const int np = static_cast<int>(pts.size()), nf = static_cast<int>(basis.size());
  ev.val.resize(np, nf);
  ev.dx.resize(np, nf);
  ev.dy.resize(np, nf);
  for (int j = 0; j < nf; ++j) {
    const Poly2& p = basis[static_cast<size_t>(j)];
    const Poly2 px = p.dx(), py = p.dy();
    for (int i = 0; i < np; ++i) {
      ev.val(i, j) = p.eval(pts[static_cast<size_t>(i)]);
      ev.dx(i, j) = px.eval(pts[static_cast<size_t>(i)]);
      ev.dy(i, j) = py.eval(pts[static_cast<size_t>(i)]);
    }
  }
  return ev;
}

NodalBasis nodal_basis(int degree) {
  if (degree < 1 || degree > 6) throw std::invalid_argument("nodal_basis: degree must be in 1..6");
  NodalBasis nb;
  nb.degree = degree;
  const double m = degree;
  nb.nodes = {{0, 0}, {1, 0}, {0, 1}};
  const Point2 corners[3] = {{0, 0}, {1, 0}, {0, 1}};
  for (int e = 0; e < 3; ++e)
    for (int k = 1; k < degree; ++k)
      nb.nodes.push_back(corners[e] + (k / m) * (corners[(e + 1) % 3] - corners[e]));
  for (int i = 1; i < degree; ++i)
    for (int j = 1; i + j < degree; ++j) nb.nodes.push_back({i / m, j / m});

  const std::vector<Poly2> mono = monomials(degree);
  const int n = static_cast<int>(mono.size());
  if (static_cast<int>(nb.nodes.size()) != n)
    throw std::logic_error("nodal_basis: node count mismatch");
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) V(i, j) = mono[static_cast<size_t>(j)].eval(nb.nodes[static_cast<size_t>(i)]);
  const Eigen::MatrixXd C = V.partialPivLu().inverse();
  nb.funcs.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Poly2 q(0);
    for (int j = 0; j < n; ++j) q += C(j, i) * mono[static_cast<size_t>(j)];
    nb.funcs[static_cast<size_t>(i)] = q.trimmed();
  }
  return nb;
}

double edge_lagrange(int degree, int node, double t) {
  double v = 1.0;
  for (int j = 0; j <= degree; ++j) {
    if (j == node) continue;
    v *= (t * degree - j) / (node - j);
  }
  return v;
}

TrialSpace build_trial_space(const TriMesh& meshH, const EdgeClass& cls, int m, TraceMode mode) {
  if (m < 1 || m > 3) throw std::invalid_argument("build_trial_space: m must be in 1..3");
  TrialSpace ts;
  ts.m = m;
  ts.mode = mode;
  ts.u_block = m * (m + 1) / 2;
  ts.n_u = meshH.n_triangles() * ts.u_block;

  if (mode == TraceMode::nonconforming) {
    ts.edge_dof_base.assign(static_cast<size_t>(meshH.n_edges()), -1);
    int next = 0;
    for (int e = 0; e < meshH.n_edges(); ++e)
      if (edge_has_trace(meshH, cls, e)) {
        ts.edge_dof_base[static_cast<size_t>(e)] = next;
        next += m + 1;
      }
    ts.n_theta = next;
    return ts;
  }

  // Conforming: continuous P_m skeleton nodes. A node is kept iff it lies on
  // at least one non-characteristic edge and not on the inflow closure.
  const int n_nodes = meshH.n_vertices() + meshH.n_edges() * (m - 1);
  std::vector<char> on_nonchar(static_cast<size_t>(n_nodes), 0);
  std::vector<char> on_inflow(static_cast<size_t>(n_nodes), 0);
  for (int e = 0; e < meshH.n_edges(); ++e) {
    const MeshEdge& me = meshH.edges()[static_cast<size_t>(e)];
    const bool nonchar = edge_noncharacteristic(meshH, cls, e);
    bool inflow = false;
    if (me.boundary()) {
      const auto& tv = meshH.triangles[static_cast<size_t>(me.tri[0])].v;
      for (int le = 0; le < 3; ++le) {
        const int a = tv[static_cast<size_t>(le)], b = tv[static_cast<size_t>((le + 1) % 3)];
        if ((a == me.a && b == me.b) || (a == me.b && b == me.a))
          inflow = cls.side_label(me.tri[0], le) == EdgeLabel::inflow;
      }
    }
    auto mark = [&](int node) {
      if (nonchar) on_nonchar[static_cast<size_t>(node)] = 1;
      if (inflow) on_inflow[static_cast<size_t>(node)] = 1;
    };
    mark(me.a);
    mark(me.b);
    for (int k = 1; k < m; ++k) mark(meshH.n_vertices() + e * (m - 1) + (k - 1));
  }
  ts.node_dof.assign(static_cast<size_t>(n_nodes), -1);
  int next = 0;
  for (int nd = 0; nd < n_nodes; ++nd)
    if (on_nonchar[static_cast<size_t>(nd)] && !on_inflow[static_cast<size_t>(nd)])
      ts.node_dof[static_cast<size_t>(nd)] = next++;
  ts.n_theta = next;
  return ts;
}

TestSpace build_test_space(const TriMesh& meshh, int degree) {
  if (degree < 1 || degree > 6) throw std::invalid_argument("build_test_space: degree must be in 1..6");
  TestSpace vs;
  vs.degree = degree;
  vs.block = (degree + 1) * (degree + 2) / 2;
  vs.n_cells = meshh.n_triangles();
  return vs;
}

}  // namespace dpg
