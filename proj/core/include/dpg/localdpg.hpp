#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

#include "dpg/polyspace.hpp"
#include "dpg/problem.hpp"

namespace dpg {

// ---------------------------------------------------------------------------
// Production path: broken H(b;K) Gram matrices, the local bilinear form of
// the ultraweak formulation, and the trial-to-test Riesz solves.
// ---------------------------------------------------------------------------

struct LocalGram {
  Eigen::MatrixXd G;
  Eigen::LLT<Eigen::MatrixXd> chol;
};

/// <psi_i, psi_j>_{H(b;K)} for the reference test basis pushed to K; the true
/// (possibly variable) field is used. Throws when the Cholesky factorization
/// fails.
LocalGram local_gram(const Tri& K, const std::function<Point2(const Point2&)>& b,
                     const std::vector<Poly2>& test_basis, int quad_degree);

/// Per-macro-element trial/test coupling block and load vector. Rows are the
/// broken test dofs of the subgrid cells inside the macro element (grouped
/// per cell); columns are the local trial dofs, u-block first, then the
/// element's unconstrained theta dofs.
struct LocalB {
  Eigen::MatrixXd B;
  Eigen::VectorXd load;
  std::vector<int> trial_dofs;  // global trial indices
  std::vector<int> cells;       // subgrid cell ids (row blocks)
};

/// What enters the load vector of a local block.
enum class LoadParts { full, f_only, gbar_only };

/// Shared immutable context for the element-local assembly pipeline.
struct DpgWorkspace {
  const TriMesh& meshH;
  const TriMesh& meshh;
  const RefinementMap& refmap;
  const TransportProblem& problem;
  const TrialSpace& trial;
  const TestSpace& test;
  EdgeClass clsh;               // subgrid classification (cell-averaged field)
  std::vector<Poly2> test_basis, u_basis;
  NodalBasis trace_nodal;       // conforming traces
  QuadRule vol_rule, edge_quad;
  BasisEval test_at_vol, u_at_vol;  // reference tables at vol_rule points
  int quad_degree = 0;

  DpgWorkspace(const TriMesh& mH, const TriMesh& mh, const RefinementMap& rm,
               const TransportProblem& pr, const TrialSpace& tr, const TestSpace& te,
               int quad_deg);
};

/// Builds the Eq. (16)/(90) block of one macro element: volume terms
/// u (c v - b.grad v - v div b) over each subgrid cell plus the jump pairing
/// over non-characteristic skeleton portions, and the load f(v)
/// (minus the g_bar boundary pairing when the problem carries one).
LocalB local_bform(const DpgWorkspace& ws, int macro, LoadParts parts = LoadParts::full);

/// Gram blocks of all subgrid cells inside a macro element.
std::vector<LocalGram> local_grams(const DpgWorkspace& ws, int macro);

/// Coefficients of T^h phi for every local trial basis function phi:
/// columns solve G T = B blockwise over the subgrid cells.
Eigen::MatrixXd trial_to_test(const std::vector<LocalGram>& grams, const LocalB& lb);

// ---------------------------------------------------------------------------
// Constant-field calculus: exact and near-optimal local test functions.
// ---------------------------------------------------------------------------

/// Piecewise polynomial in a rotated frame aligned with the convection
/// direction; slabs partition the frame y-range (a single unbounded slab
/// means the function is a global polynomial).
class TestPolynomial {
 public:
  struct Slab {
    double ylo, yhi;
    Poly2 p, px, py;  // frame-coordinate polynomial and partials
  };

  Frame frame;
  std::vector<Slab> slabs;

  static TestPolynomial from_poly(const Poly2& ambient_poly);
  static TestPolynomial in_frame(const Frame& f, std::vector<std::pair<std::array<double, 2>, Poly2>> pieces);

  bool piecewise() const { return slabs.size() > 1; }
  double eval(const Point2& ambient) const;
  Point2 grad(const Point2& ambient) const;
  double dir_deriv(const Point2& ambient, const Point2& b) const { return dot(b, grad(ambient)); }

  /// Ambient lines bounding the slabs, for split quadrature.
  std::vector<Interface> break_interfaces() const;

 private:
  const Slab& slab_at(double yframe) const;
};

/// Entry/exit abscissae of the line through `through` along +-bbar, in the
/// frame where bbar points along +x. Throws when the line misses K.
struct RayExit {
  double x_minus, x_plus;
};
RayExit ray_exit(const Polygon& K, const Point2& bbar, const Point2& through);

/// Shadow construction: the inflow face F maximizing |bbar.n|, the enclosing
/// triangle K-bar with single inflow face, and the affine inflow abscissa
/// x-bar_minus(y) = xbar0 + xbar1 * y in frame coordinates.
struct ShadowFrame {
  Frame frame;
  int inflow_face = -1;
  double xbar0 = 0, xbar1 = 0;
  std::array<Point2, 3> shadow;  // K-bar vertices (ambient)
};
ShadowFrame shadow_frame(const Tri& K, const Point2& bbar);

/// Exact optimal test function for constant coefficients w.r.t. the modified
/// inner product: continuous piecewise polynomial over the fan induced by
/// the breakpoints of y -> (x_-(y), x_+(y)). Requires diam(K) <= |bbar|.
TestPolynomial analytic_optimal_test(const Tri& K, const Point2& bbar, double cbar, double dbar,
                                     const Poly2& u, const Poly2& w);

/// Polynomial truncation of the optimal test function built from the shadow
/// inflow plane; a single polynomial of degree <= max(deg u, deg w) + 1.
TestPolynomial near_optimal_test(const Tri& K, const Point2& bbar, double cbar, double dbar,
                                 const Poly2& u, const Poly2& w);

/// << v, z >>_{K,bbar} = int_K d_b v d_b z
///   + int_{inflow bdry} v z |(bbar/|bbar|).n| r(s) ds, with r(s) the
/// distance from s to the outflow boundary along bbar. Requires
/// diam(K) <= |bbar|.
double modified_inner_product(const Tri& K, const Point2& bbar, const TestPolynomial& v,
                              const TestPolynomial& z, int quad_degree);

/// Perturbed local form: int_K cbar v u + (w-u) bbar.grad v + v bbar.grad w
///   + dbar v w.
double perturbed_local_bform(const Tri& K, const Point2& bbar, double cbar, double dbar,
                             const Poly2& u, const Poly2& w, const TestPolynomial& v,
                             int quad_degree);

/// Broken-norm helpers for the perturbation studies.
double hb_norm_sq(const Tri& K, const Point2& bbar, const TestPolynomial& v, int quad_degree);
double hb_dist_sq(const Tri& K, const Point2& bbar, const TestPolynomial& v,
                  const TestPolynomial& z, int quad_degree);

/// Integrates a pointwise integrand over K split along the given ambient
/// lines (used wherever piecewise test polynomials meet quadrature).
double integrate_faceted(const Tri& K, const std::vector<Interface>& cuts,
                         const std::function<double(const Point2&)>& f, const QuadRule& rule);

}  // namespace dpg
