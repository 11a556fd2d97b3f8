#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "dpg/polyspace.hpp"
#include "dpg/quadrature.hpp"

using namespace dpg;

namespace {

Eigen::MatrixXd gram(const std::vector<Poly2>& basis) {
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = (basis[static_cast<size_t>(i)] * basis[static_cast<size_t>(j)]).integral_ref();
  return G;
}

std::vector<Point2> constant_field(const TriMesh& m, const Point2& b) {
  return std::vector<Point2>(static_cast<size_t>(m.n_triangles()), b);
}

// Geometric position of a conforming skeleton node.
Point2 node_position(const TriMesh& mesh, int m, int node) {
  if (node < mesh.n_vertices()) return mesh.vertices[static_cast<size_t>(node)];
  const int rest = node - mesh.n_vertices();
  const int e = rest / (m - 1), k = rest % (m - 1) + 1;
  const MeshEdge& me = mesh.edges()[static_cast<size_t>(e)];
  const Point2 a = mesh.vertices[static_cast<size_t>(me.a)];
  const Point2 b = mesh.vertices[static_cast<size_t>(me.b)];
  return a + (static_cast<double>(k) / m) * (b - a);
}

}  // namespace

TEST_CASE("reference basis: cardinality and normalization") {
  const std::vector<Poly2> b0 = reference_basis(0);
  REQUIRE(b0.size() == 1);
  CHECK(b0[0].eval(0.3, 0.3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  CHECK(reference_basis(1).size() == 3);
  CHECK(reference_basis(2).size() == 6);
  CHECK_THROWS(reference_basis(7));
  CHECK_THROWS(reference_basis(-1));
}

TEST_CASE("reference basis: orthonormality") {
  for (int d : {1, 2, 4}) {
    const Eigen::MatrixXd G = gram(reference_basis(d));
    const double err = (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
    CHECK(err < 1e-12);
  }
}

TEST_CASE("reference basis: conditioning gate for degree <= 4") {
  for (int d = 0; d <= 4; ++d) {
    const Eigen::MatrixXd G = gram(reference_basis(d));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    CHECK(cond <= 10.0);
  }
}

TEST_CASE("basis evaluation gradients match finite differences") {
  const std::vector<Poly2> basis = reference_basis(3);
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> unif(0.05, 0.4);
  std::vector<Point2> pts;
  for (int k = 0; k < 10; ++k) pts.push_back({unif(rng), unif(rng)});
  const BasisEval ev = evaluate_basis(basis, pts);
  const double h = 1e-6;
  for (size_t q = 0; q < pts.size(); ++q)
    for (size_t j = 0; j < basis.size(); ++j) {
      const double fdx =
          (basis[j].eval(pts[q].x + h, pts[q].y) - basis[j].eval(pts[q].x - h, pts[q].y)) / (2 * h);
      const double fdy =
          (basis[j].eval(pts[q].x, pts[q].y + h) - basis[j].eval(pts[q].x, pts[q].y - h)) / (2 * h);
      CHECK(std::abs(ev.dx(static_cast<int>(q), static_cast<int>(j)) - fdx) < 1e-6);
      CHECK(std::abs(ev.dy(static_cast<int>(q), static_cast<int>(j)) - fdy) < 1e-6);
    }
}

TEST_CASE("nodal basis: Lagrange property and partition of unity") {
  for (int m : {1, 2, 3}) {
    const NodalBasis nb = nodal_basis(m);
    for (size_t i = 0; i < nb.nodes.size(); ++i)
      for (size_t j = 0; j < nb.funcs.size(); ++j)
        CHECK(nb.funcs[j].eval(nb.nodes[i]) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
    double sum = 0;
    for (const Poly2& f : nb.funcs) sum += f.eval(0.21, 0.37);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("edge Lagrange basis sums to one") {
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int m : {1, 2, 3})
    for (int k = 0; k < 10; ++k) {
      const double t = unif(rng);
      double s = 0;
      for (int j = 0; j <= m; ++j) s += edge_lagrange(m, j, t);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("trial space dof counts on the unit-square mesh") {
  const TriMesh mesh = build_structured_mesh(1);
  const EdgeClass cls = classify_edges(mesh, constant_field(mesh, {1, 1}));

  const TrialSpace conf = build_trial_space(mesh, cls, 1, TraceMode::conforming);
  CHECK(conf.u_block == 1);  // piecewise constants
  CHECK(conf.n_u == 2);
  CHECK(conf.n_theta == 1);  // only the vertex (1,1) escapes the inflow closure
  CHECK(conf.total_dim() == 3);

  // Trace dofs live on the right and top outflow edges only; the diagonal is
  // characteristic for b = (1,1), so it carries none (its jump pairing is
  // identically zero).
  const TrialSpace nonc = build_trial_space(mesh, cls, 1, TraceMode::nonconforming);
  CHECK(nonc.n_u == 2);
  CHECK(nonc.n_theta == 4);
  CHECK(nonc.total_dim() == 6);

  const EdgeClass cls_h = classify_edges(mesh, constant_field(mesh, {1, 0}));
  const TrialSpace conf_h = build_trial_space(mesh, cls_h, 1, TraceMode::conforming);
  CHECK(conf_h.n_theta == 2);  // vertices (1,0) and (1,1)
}

TEST_CASE("trial space u-block sizes") {
  const TriMesh mesh = build_structured_mesh(2);
  const EdgeClass cls = classify_edges(mesh, constant_field(mesh, {1, 1}));
  CHECK(build_trial_space(mesh, cls, 1, TraceMode::conforming).u_block == 1);
  CHECK(build_trial_space(mesh, cls, 2, TraceMode::conforming).u_block == 3);
  CHECK(build_trial_space(mesh, cls, 3, TraceMode::conforming).u_block == 6);
  CHECK_THROWS(build_trial_space(mesh, cls, 0, TraceMode::conforming));
  CHECK_THROWS(build_trial_space(mesh, cls, 4, TraceMode::conforming));
}

TEST_CASE("conforming trace interpolates skeleton polynomials") {
  // w = x*y is a degree-2 polynomial vanishing on the inflow boundary of
  // b = (1,1); its nodal values must reproduce it on every skeleton edge.
  const TriMesh mesh = build_structured_mesh(2);
  const EdgeClass cls = classify_edges(mesh, constant_field(mesh, {1, 1}));
  const int m = 2;
  const TrialSpace ts = build_trial_space(mesh, cls, m, TraceMode::conforming);
  auto w = [](const Point2& p) { return p.x * p.y; };

  // Every kept node carries the nodal value of w; verify reproduction via
  // the edge restriction of the P2 edge Lagrange basis.
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (!edge_has_trace(mesh, cls, e)) continue;
    const MeshEdge& me = mesh.edges()[static_cast<size_t>(e)];
    const Point2 a = mesh.vertices[static_cast<size_t>(me.a)];
    const Point2 b = mesh.vertices[static_cast<size_t>(me.b)];
    // nodes on this edge: endpoints and the midpoint node
    const int nodes[3] = {me.a, me.b, mesh.n_vertices() + e * (m - 1)};
    const double tpos[3] = {0.0, 1.0, 0.5};
    for (double t : {0.17, 0.5, 0.83}) {
      const Point2 x = a + t * (b - a);
      double interp = 0;
      for (int k = 0; k < 3; ++k) {
        const double nodal_value = w(node_position(mesh, m, nodes[k]));
        // edge restriction of the P2 Lagrange basis in edge parameter
        const int which = tpos[k] == 0.0 ? 0 : (tpos[k] == 1.0 ? 2 : 1);
        interp += nodal_value * edge_lagrange(2, which, t);
      }
      CHECK(interp == doctest::Approx(w(x)).epsilon(1e-12));
      // constrained nodes really carry zero
      for (int k = 0; k < 3; ++k)
        if (ts.node_dof[static_cast<size_t>(nodes[k])] < 0)
          CHECK(std::abs(w(node_position(mesh, m, nodes[k]))) < 1e-13);
    }
  }
}

TEST_CASE("test space dimensions") {
  const TriMesh two = build_structured_mesh(1);
  CHECK(build_test_space(two, 2).total_dim() == 12);
  CHECK(build_test_space(two, 3).total_dim() == 20);
  auto [eight, map] = red_refine(two, 1);
  CHECK(build_test_space(eight, 2).total_dim() == 48);
}
