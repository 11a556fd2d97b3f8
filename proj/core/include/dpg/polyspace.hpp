#pragma once

#include <Eigen/Dense>

#include <vector>

#include "dpg/mesh.hpp"
#include "dpg/poly2.hpp"

namespace dpg {

/// L2-orthonormal basis of P_degree on the reference triangle, built by
/// Gram-Schmidt over the monomials (with one re-orthonormalization pass).
/// Supported range 0..6; cardinality (degree+1)(degree+2)/2.
std::vector<Poly2> reference_basis(int degree);

/// Values and gradients of a basis at a batch of points (rows = points).
struct BasisEval {
  Eigen::MatrixXd val, dx, dy;
};
BasisEval evaluate_basis(const std::vector<Poly2>& basis, const std::vector<Point2>& pts);

/// Lagrange basis of P_degree on the reference triangle. Node order:
/// the 3 vertices, then for each edge e the m-1 interior nodes walking from
/// vertex e to vertex (e+1)%3, then interior lattice nodes.
struct NodalBasis {
  int degree = 1;
  std::vector<Point2> nodes;
  std::vector<Poly2> funcs;

  int n_edge_nodes() const { return degree - 1; }
  int n_interior() const { return (degree - 1) * (degree - 2) / 2; }
  int vertex_node(int v) const { return v; }
  int edge_node(int e, int k) const { return 3 + e * (degree - 1) + (k - 1); }  // k in 1..m-1
  int interior_node(int k) const { return 3 + 3 * (degree - 1) + k; }
};
NodalBasis nodal_basis(int degree);

/// 1D Lagrange value at parameter t for node k of the degree-m edge basis
/// (nodes at j/m, j = 0..m).
double edge_lagrange(int degree, int node, double t);

enum class TraceMode { conforming, nonconforming };

/// DOF layout of the trial pair (u, theta) on the macro mesh. The u-block of
/// element K' occupies [K' * u_block, (K'+1) * u_block); theta dofs follow
/// the u dofs in the global ordering.
struct TrialSpace {
  int m = 1;
  TraceMode mode = TraceMode::conforming;
  int u_block = 0;  // dim P_{m-1}
  int n_u = 0;
  int n_theta = 0;

  // conforming: global skeleton-node enumeration is vertex id, then
  // n_vertices + edge * (m-1) + (k-1); node_dof maps it to a theta index
  // or -1 when constrained/absent.
  std::vector<int> node_dof;

  // nonconforming: base theta index of the (m+1) dofs of each mesh edge,
  // -1 when the edge carries no trace.
  std::vector<int> edge_dof_base;

  int total_dim() const { return n_u + n_theta; }
  int u_dof(int macro, int i) const { return macro * u_block + i; }
  int theta_dof_global(int theta_idx) const { return n_u + theta_idx; }
};

/// cls must classify the macro mesh against the (cell-averaged) field; inflow
/// boundary edges constrain theta to zero, characteristic edges carry no
/// trace dofs (their jump pairing vanishes identically).
TrialSpace build_trial_space(const TriMesh& meshH, const EdgeClass& cls, int m, TraceMode mode);

/// Broken P_degree space on the subgrid, one dense block per cell.
struct TestSpace {
  int degree = 2;
  int block = 0;
  int n_cells = 0;

  int total_dim() const { return block * n_cells; }
  int dof(int cell, int i) const { return cell * block + i; }
};
TestSpace build_test_space(const TriMesh& meshh, int degree);

}  // namespace dpg
