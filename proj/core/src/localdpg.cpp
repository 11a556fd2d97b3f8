#include "dpg/localdpg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dpg/quadrature.hpp"

namespace dpg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Production path
// ---------------------------------------------------------------------------

DpgWorkspace::DpgWorkspace(const TriMesh& mH, const TriMesh& mh, const RefinementMap& rm,
                           const TransportProblem& pr, const TrialSpace& tr, const TestSpace& te,
                           int quad_deg)
    : meshH(mH),
      meshh(mh),
      refmap(rm),
      problem(pr),
      trial(tr),
      test(te),
      trace_nodal(nodal_basis(tr.m)),
      quad_degree(quad_deg > 0 ? quad_deg : 2 * (tr.m + 2)) {
  if (tr.mode == TraceMode::nonconforming && mh.n_triangles() != mH.n_triangles())
    throw std::invalid_argument("nonconforming traces require subgrid depth 0");
  const CellData cd = cell_averages(pr, mh, quad_degree);
  clsh = classify_edges(mh, cd.bbar);
  test_basis = reference_basis(te.degree);
  u_basis = reference_basis(tr.m - 1);
  vol_rule = triangle_rule(std::min(quad_degree, 10));
  edge_quad = edge_rule(std::min(quad_degree, 40));
  test_at_vol = evaluate_basis(test_basis, vol_rule.points);
}

std::vector<LocalGram> local_grams(const DpgWorkspace& ws, int macro) {
  std::vector<LocalGram> out;
  for (int cell : ws.refmap.children_of[static_cast<size_t>(macro)]) {
    const Tri K = ws.meshh.tri_geometry(cell);
    const AffineMap F(K);
    const double jac = std::abs(F.det());
    const int nb = static_cast<int>(ws.test_basis.size());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd bdphi(nb);
    for (size_t q = 0; q < ws.vol_rule.size(); ++q) {
      const Point2 x = F.apply(ws.vol_rule.points[q]);
      const Point2 b = ws.problem.b(x);
      for (int i = 0; i < nb; ++i) {
        const Point2 g = F.push_gradient({ws.test_at_vol.dx(static_cast<int>(q), i),
                                          ws.test_at_vol.dy(static_cast<int>(q), i)});
        bdphi(i) = dot(b, g);
      }
      const double wq = ws.vol_rule.weights[q] * jac;
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j <= i; ++j)
          G(i, j) += wq * (ws.test_at_vol.val(static_cast<int>(q), i) *
                               ws.test_at_vol.val(static_cast<int>(q), j) +
                           bdphi(i) * bdphi(j));
    }
    G = G.selfadjointView<Eigen::Lower>();
    LocalGram lg;
    lg.G = G;
    lg.chol.compute(G);
    if (lg.chol.info() != Eigen::Success)
      throw std::runtime_error("local_gram: Cholesky failed on subgrid cell " +
                               std::to_string(cell) + " (under-integration or degenerate element)");
    out.push_back(std::move(lg));
  }
  return out;
}

LocalGram local_gram(const Tri& K, const std::function<Point2(const Point2&)>& b,
                     const std::vector<Poly2>& test_basis, int quad_degree) {
  const QuadRule rule = triangle_rule(std::min(quad_degree, 10));
  const BasisEval ev = evaluate_basis(test_basis, rule.points);
  const AffineMap F(K);
  const double jac = std::abs(F.det());
  const int nb = static_cast<int>(test_basis.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::VectorXd bdphi(nb);
  for (size_t q = 0; q < rule.size(); ++q) {
    const Point2 x = F.apply(rule.points[q]);
    const Point2 bq = b(x);
    for (int i = 0; i < nb; ++i)
      bdphi(i) = dot(bq, F.push_gradient({ev.dx(static_cast<int>(q), i), ev.dy(static_cast<int>(q), i)}));
    const double wq = rule.weights[q] * jac;
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j <= i; ++j)
        G(i, j) += wq * (ev.val(static_cast<int>(q), i) * ev.val(static_cast<int>(q), j) +
                         bdphi(i) * bdphi(j));
  }
  G = G.selfadjointView<Eigen::Lower>();
  LocalGram lg;
  lg.G = G;
  lg.chol.compute(G);
  if (lg.chol.info() != Eigen::Success)
    throw std::runtime_error("local_gram: Cholesky failed (under-integration or degenerate element)");
  return lg;
}

namespace {

struct ThetaLayout {
  // conforming: local nodal indices (into trace_nodal) and their dof columns
  std::vector<int> local_nodes;
  // nonconforming: per local macro edge, base column (-1 if none)
  std::array<int, 3> edge_col{-1, -1, -1};
  std::array<bool, 3> edge_reversed{false, false, false};
  int n_cols = 0;
};

ThetaLayout theta_layout(const DpgWorkspace& ws, int macro, std::vector<int>& trial_dofs) {
  ThetaLayout lay;
  const TrialSpace& tr = ws.trial;
  const auto& tv = ws.meshH.triangles[static_cast<size_t>(macro)].v;
  if (tr.mode == TraceMode::conforming) {
    const int m = tr.m;
    for (int vloc = 0; vloc < 3; ++vloc) {
      const int dof = tr.node_dof[static_cast<size_t>(tv[static_cast<size_t>(vloc)])];
      if (dof < 0) continue;
      lay.local_nodes.push_back(ws.trace_nodal.vertex_node(vloc));
      trial_dofs.push_back(tr.theta_dof_global(dof));
      ++lay.n_cols;
    }
    for (int e = 0; e < 3; ++e) {
      const int a = tv[static_cast<size_t>(e)], b = tv[static_cast<size_t>((e + 1) % 3)];
      const int ge = ws.meshH.edge_index(a, b);
      const bool reversed = a > b;
      for (int k = 1; k < m; ++k) {
        const int gk = reversed ? m - k : k;
        const int node = ws.meshH.n_vertices() + ge * (m - 1) + (gk - 1);
        const int dof = tr.node_dof[static_cast<size_t>(node)];
        if (dof < 0) continue;
        lay.local_nodes.push_back(ws.trace_nodal.edge_node(e, k));
        trial_dofs.push_back(tr.theta_dof_global(dof));
        ++lay.n_cols;
      }
    }
  } else {
    for (int e = 0; e < 3; ++e) {
      const int a = tv[static_cast<size_t>(e)], b = tv[static_cast<size_t>((e + 1) % 3)];
      const int ge = ws.meshH.edge_index(a, b);
      const int base = tr.edge_dof_base[static_cast<size_t>(ge)];
      if (base < 0) continue;
      lay.edge_col[static_cast<size_t>(e)] = lay.n_cols;
      lay.edge_reversed[static_cast<size_t>(e)] = a > b;
      for (int k = 0; k <= tr.m; ++k) trial_dofs.push_back(tr.theta_dof_global(base + k));
      lay.n_cols += tr.m + 1;
    }
  }
  return lay;
}

}  // namespace

LocalB local_bform(const DpgWorkspace& ws, int macro, LoadParts parts) {
  const TrialSpace& tr = ws.trial;
  const Tri KH = ws.meshH.tri_geometry(macro);
  const AffineMap FH(KH);
  LocalB lb;
  lb.cells = ws.refmap.children_of[static_cast<size_t>(macro)];
  const int n_cells = static_cast<int>(lb.cells.size());
  const int tb = ws.test.block;

  for (int i = 0; i < tr.u_block; ++i) lb.trial_dofs.push_back(tr.u_dof(macro, i));
  const ThetaLayout lay = theta_layout(ws, macro, lb.trial_dofs);
  const int n_trial = static_cast<int>(lb.trial_dofs.size());

  lb.B = Eigen::MatrixXd::Zero(n_cells * tb, n_trial);
  lb.load = Eigen::VectorXd::Zero(n_cells * tb);

  const bool with_f = parts != LoadParts::gbar_only;
  const bool with_gbar = parts != LoadParts::f_only && ws.problem.g_bar.has_value();

  for (int ci = 0; ci < n_cells; ++ci) {
    const int cell = lb.cells[static_cast<size_t>(ci)];
    const Tri K = ws.meshh.tri_geometry(cell);
    const AffineMap F(K);
    const double jac = std::abs(F.det());
    const int row0 = ci * tb;

    // Volume terms: u (c v - b.grad v - v div b), and the f-load.
    for (size_t q = 0; q < ws.vol_rule.size(); ++q) {
      const Point2 x = F.apply(ws.vol_rule.points[q]);
      const Point2 b = ws.problem.b(x);
      const double cq = ws.problem.c(x), dq = ws.problem.div_b(x);
      const double wq = ws.vol_rule.weights[q] * jac;
      const Point2 xref_H = FH.invert(x);
      for (int i = 0; i < tb; ++i) {
        const double psi = ws.test_at_vol.val(static_cast<int>(q), i);
        const Point2 g = F.push_gradient({ws.test_at_vol.dx(static_cast<int>(q), i),
                                          ws.test_at_vol.dy(static_cast<int>(q), i)});
        const double kern = cq * psi - dot(b, g) - psi * dq;
        for (int j = 0; j < tr.u_block; ++j)
          lb.B(row0 + i, j) += wq * kern * ws.u_basis[static_cast<size_t>(j)].eval(xref_H);
      }
    }
    if (with_f) {
      const bool smooth = ws.problem.f.interfaces.empty();
      const Polygon kp = {K[0], K[1], K[2]};
      const std::vector<Polygon> pieces =
          smooth ? std::vector<Polygon>{kp} : split_polygon(kp, ws.problem.f.interfaces);
      for (const Polygon& piece : pieces)
        for (const Tri& sub : fan_triangulate(piece)) {
          const AffineMap Fs(sub);
          const double sj = std::abs(Fs.det());
          for (size_t q = 0; q < ws.vol_rule.size(); ++q) {
            const Point2 x = Fs.apply(ws.vol_rule.points[q]);
            const double wq = ws.vol_rule.weights[q] * sj * ws.problem.f.eval(x);
            if (wq == 0) continue;
            const Point2 xr = F.invert(x);
            for (int i = 0; i < tb; ++i)
              lb.load(row0 + i) += wq * ws.test_basis[static_cast<size_t>(i)].eval(xr);
          }
        }
    }

    // Jump terms over the non-characteristic part of the cell boundary, plus
    // the g_bar pairing of the inhomogeneous right-hand side.
    const auto& cv = ws.meshh.triangles[static_cast<size_t>(cell)].v;
    for (int le = 0; le < 3; ++le) {
      const int a = cv[static_cast<size_t>(le)], bvx = cv[static_cast<size_t>((le + 1) % 3)];
      const int ge = ws.meshh.edge_index(a, bvx);
      if (!edge_noncharacteristic(ws.meshh, ws.clsh, ge)) continue;
      const Point2 A = K[le], Bp = K[(le + 1) % 3];
      const Point2 n = outward_normal(A, Bp);
      const bool trace_cols = edge_has_trace(ws.meshh, ws.clsh, ge);

      // Nonconforming traces live on macro edges; with depth 0 the subgrid
      // edge is the macro edge.
      int nc_col = -1;
      bool nc_rev = false;
      int macro_local_edge = -1;
      if (trace_cols && tr.mode == TraceMode::nonconforming) {
        const auto& mv = ws.meshH.triangles[static_cast<size_t>(macro)].v;
        for (int me = 0; me < 3; ++me) {
          const int ma = mv[static_cast<size_t>(me)], mb = mv[static_cast<size_t>((me + 1) % 3)];
          if ((ma == a && mb == bvx) || (ma == bvx && mb == a)) macro_local_edge = me;
        }
        if (macro_local_edge >= 0) {
          nc_col = lay.edge_col[static_cast<size_t>(macro_local_edge)];
          nc_rev = lay.edge_reversed[static_cast<size_t>(macro_local_edge)];
        }
      }

      auto accumulate = [&](const Point2& P, const Point2& Q) {
        const double len = norm(Q - P);
        if (len <= 0) return;
        for (size_t q = 0; q < ws.edge_quad.size(); ++q) {
          const double t = ws.edge_quad.points[q].x;
          const Point2 x = P + t * (Q - P);
          const double flux = dot(ws.problem.b(x), n);
          const double wq = ws.edge_quad.weights[q] * len * flux;
          const Point2 xr = F.invert(x);
          double gbar = 0;
          if (with_gbar) gbar = ws.problem.g_bar->eval(x);
          for (int i = 0; i < tb; ++i) {
            const double psi = ws.test_basis[static_cast<size_t>(i)].eval(xr);
            if (with_gbar) lb.load(row0 + i) -= wq * psi * gbar;
            if (!trace_cols) continue;
            if (tr.mode == TraceMode::conforming) {
              const Point2 xH = FH.invert(x);
              for (size_t c = 0; c < lay.local_nodes.size(); ++c) {
                const double th =
                    ws.trace_nodal.funcs[static_cast<size_t>(lay.local_nodes[c])].eval(xH);
                lb.B(row0 + i, tr.u_block + static_cast<int>(c)) += wq * psi * th;
              }
            } else if (nc_col >= 0) {
              // Edge parameter measured from the canonical (a < b) endpoint.
              const double tc = nc_rev ? 1.0 - t : t;
              for (int k = 0; k <= tr.m; ++k)
                lb.B(row0 + i, tr.u_block + nc_col + k) +=
                    wq * psi * edge_lagrange(tr.m, k, tc);
            }
          }
        }
      };

      if (with_gbar && !ws.problem.g_bar->interfaces.empty()) {
        std::vector<double> ts = segment_crossings(A, Bp, ws.problem.g_bar->interfaces);
        ts.insert(ts.begin(), 0.0);
        ts.push_back(1.0);
        for (size_t s = 0; s + 1 < ts.size(); ++s)
          accumulate(A + ts[s] * (Bp - A), A + ts[s + 1] * (Bp - A));
      } else {
        accumulate(A, Bp);
      }
    }
  }
  return lb;
}

Eigen::MatrixXd trial_to_test(const std::vector<LocalGram>& grams, const LocalB& lb) {
  const int tb = static_cast<int>(grams.empty() ? 0 : grams[0].G.rows());
  Eigen::MatrixXd T(lb.B.rows(), lb.B.cols());
  for (size_t c = 0; c < grams.size(); ++c) {
    const int r0 = static_cast<int>(c) * tb;
    T.middleRows(r0, tb) = grams[c].chol.solve(lb.B.middleRows(r0, tb));
  }
  return T;
}

// ---------------------------------------------------------------------------
// Constant-field calculus
// ---------------------------------------------------------------------------

TestPolynomial TestPolynomial::from_poly(const Poly2& ambient_poly) {
  TestPolynomial tp;
  tp.slabs.push_back({-kInf, kInf, ambient_poly, ambient_poly.dx(), ambient_poly.dy()});
  return tp;
}

TestPolynomial TestPolynomial::in_frame(
    const Frame& f, std::vector<std::pair<std::array<double, 2>, Poly2>> pieces) {
  TestPolynomial tp;
  tp.frame = f;
  for (auto& [rng, p] : pieces) tp.slabs.push_back({rng[0], rng[1], p, p.dx(), p.dy()});
  return tp;
}

const TestPolynomial::Slab& TestPolynomial::slab_at(double yframe) const {
  for (const Slab& s : slabs)
    if (yframe <= s.yhi || &s == &slabs.back()) return s;
  return slabs.back();
}

double TestPolynomial::eval(const Point2& ambient) const {
  const Point2 q = frame.to_frame(ambient);
  return slab_at(q.y).p.eval(q);
}

Point2 TestPolynomial::grad(const Point2& ambient) const {
  const Point2 q = frame.to_frame(ambient);
  const Slab& s = slab_at(q.y);
  return frame.to_ambient({s.px.eval(q), s.py.eval(q)});
}

std::vector<Interface> TestPolynomial::break_interfaces() const {
  std::vector<Interface> cuts;
  for (size_t k = 0; k + 1 < slabs.size(); ++k)
    cuts.push_back(Interface::line({-frame.s, frame.c}, slabs[k].yhi));
  return cuts;
}

RayExit ray_exit(const Polygon& K, const Point2& bbar, const Point2& through) {
  const Frame fr(bbar);
  const double y = fr.to_frame(through).y;
  double lo = kInf, hi = -kInf;
  const size_t n = K.size();
  double scale = 0;
  for (size_t i = 0; i < n; ++i) scale = std::max(scale, norm(K[i] - K[(i + 1) % n]));
  const double tol = 1e-12 * scale;
  for (size_t i = 0; i < n; ++i) {
    const Point2 P = fr.to_frame(K[i]);
    const Point2 Q = fr.to_frame(K[(i + 1) % n]);
    if (std::abs(P.y - y) <= tol && std::abs(Q.y - y) <= tol) {
      lo = std::min({lo, P.x, Q.x});
      hi = std::max({hi, P.x, Q.x});
    } else if ((P.y - y) * (Q.y - y) <= 0 && P.y != Q.y) {
      const double t = (y - P.y) / (Q.y - P.y);
      if (t >= -1e-12 && t <= 1 + 1e-12) {
        const double x = P.x + t * (Q.x - P.x);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
  }
  if (!(lo <= hi)) throw std::invalid_argument("ray_exit: line misses the polygon (outside shadow)");
  return {lo, hi};
}

ShadowFrame shadow_frame(const Tri& K, const Point2& bbar) {
  const double beta = norm(bbar);
  if (!(beta > 0)) throw std::invalid_argument("shadow_frame: zero velocity");
  ShadowFrame sf;
  sf.frame = Frame(bbar);
  double best = 0;
  for (int e = 0; e < 3; ++e) {
    const Point2 n = outward_normal(K[e], K[(e + 1) % 3]);
    const double flux = dot(bbar, n);
    if (flux < -kCharacteristicTol * beta && -flux > best) {
      best = -flux;
      sf.inflow_face = e;
    }
  }
  if (sf.inflow_face < 0)
    throw std::invalid_argument("shadow_frame: element has no inflow face");

  const Point2 f0 = sf.frame.to_frame(K[sf.inflow_face]);
  const Point2 f1 = sf.frame.to_frame(K[(sf.inflow_face + 1) % 3]);
  sf.xbar1 = (f1.x - f0.x) / (f1.y - f0.y);
  sf.xbar0 = f0.x - f0.y * sf.xbar1;

  double ymin = kInf, ymax = -kInf;
  for (int v = 0; v < 3; ++v) {
    const double yv = sf.frame.to_frame(K[v]).y;
    ymin = std::min(ymin, yv);
    ymax = std::max(ymax, yv);
  }
  const Point2 opposite = K[(sf.inflow_face + 2) % 3];
  sf.shadow = {opposite,
               sf.frame.to_ambient({sf.xbar0 + sf.xbar1 * ymin, ymin}),
               sf.frame.to_ambient({sf.xbar0 + sf.xbar1 * ymax, ymax})};
  return sf;
}

namespace {

struct SlabChains {
  double ylo, yhi;
  double am, bm;  // x_-(y) = am + bm y
  double ap, bp;  // x_+(y) = ap + bp y
};

std::vector<SlabChains> build_slabs(const std::array<Point2, 3>& vf) {
  std::array<double, 3> ys = {vf[0].y, vf[1].y, vf[2].y};
  std::sort(ys.begin(), ys.end());
  const double tol = 1e-13 * (std::abs(ys[2] - ys[0]) + 1);
  std::vector<SlabChains> slabs;
  for (int s = 0; s < 2; ++s) {
    const double ya = ys[static_cast<size_t>(s)], yb = ys[static_cast<size_t>(s + 1)];
    if (yb - ya <= tol) continue;
    const double ym = (ya + yb) / 2;
    // The horizontal line at ym crosses exactly two edges.
    double a[2], b[2];
    int found = 0;
    for (int e = 0; e < 3 && found < 2; ++e) {
      const Point2& P = vf[static_cast<size_t>(e)];
      const Point2& Q = vf[static_cast<size_t>((e + 1) % 3)];
      if ((P.y - ym) * (Q.y - ym) < 0) {
        b[found] = (Q.x - P.x) / (Q.y - P.y);
        a[found] = P.x - P.y * b[found];
        ++found;
      }
    }
    if (found != 2) throw std::logic_error("build_slabs: degenerate slab geometry");
    const double x0 = a[0] + b[0] * ym, x1 = a[1] + b[1] * ym;
    SlabChains sc;
    sc.ylo = ya;
    sc.yhi = yb;
    if (x0 <= x1) {
      sc.am = a[0]; sc.bm = b[0]; sc.ap = a[1]; sc.bp = b[1];
    } else {
      sc.am = a[1]; sc.bm = b[1]; sc.ap = a[0]; sc.bp = b[0];
    }
    slabs.push_back(sc);
  }
  if (slabs.empty()) throw std::invalid_argument("degenerate element (zero height)");
  slabs.front().ylo = -kInf;
  slabs.back().yhi = kInf;
  return slabs;
}

void require_equivalence_regime(const Tri& K, double beta) {
  if (!(beta > 0)) throw std::invalid_argument("zero velocity");
  if (K.diameter() > beta * (1 + 1e-12))
    throw std::invalid_argument("equivalence regime requires diam(K) <= |b|");
}

}  // namespace

TestPolynomial analytic_optimal_test(const Tri& K, const Point2& bbar, double cbar, double dbar,
                                     const Poly2& u, const Poly2& w) {
  const double beta = norm(bbar);
  require_equivalence_regime(K, beta);
  const Frame fr(bbar);
  const std::array<Point2, 3> vf = {fr.to_frame(K[0]), fr.to_frame(K[1]), fr.to_frame(K[2])};
  const Poly2 U = to_frame_poly(u, fr);
  const Poly2 W = to_frame_poly(w, fr);
  const Poly2 g = beta * U.dx() + cbar * U + dbar * W;     // d_b u + c u + d w
  const Poly2 Phi = (cbar * U + dbar * W).antider_x();
  const Poly2 S = W + (1.0 / beta) * Phi;

  std::vector<std::pair<std::array<double, 2>, Poly2>> pieces;
  for (const SlabChains& sc : build_slabs(vf)) {
    const Poly2 G1 = g.antider_x();
    const Poly2 inner = G1 - G1.substitute_x(sc.am, sc.bm);
    const Poly2 G2 = inner.antider_x();
    const Poly2 T1 = (G2 - G2.substitute_x(sc.am, sc.bm)) * (-1.0 / beta);
    const Poly2 A2 = W.substitute_x(sc.ap, sc.bp) - U.substitute_x(sc.am, sc.bm) +
                     (1.0 / beta) * (Phi.substitute_x(sc.ap, sc.bp) - Phi.substitute_x(sc.am, sc.bm));
    const Poly2 T2 = A2 * Poly2::affine(-sc.am, 1.0, -sc.bm);
    const Poly2 T3 = (beta * beta) * S.difference_quotient(sc.am, sc.bm, sc.ap, sc.bp);
    pieces.push_back({{sc.ylo, sc.yhi}, ((T1 + T2 + T3) * (1.0 / beta)).trimmed()});
  }
  return TestPolynomial::in_frame(fr, std::move(pieces));
}

TestPolynomial near_optimal_test(const Tri& K, const Point2& bbar, double cbar, double dbar,
                                 const Poly2& u, const Poly2& w) {
  const double beta = norm(bbar);
  const ShadowFrame sf = shadow_frame(K, bbar);
  const Poly2 U = to_frame_poly(u, sf.frame);
  const Poly2 W = to_frame_poly(w, sf.frame);
  const Poly2 lead = (W - U).substitute_x(sf.xbar0, sf.xbar1) *
                     Poly2::affine(-sf.xbar0, 1.0, -sf.xbar1);
  const Poly2 rest = (beta * W.dx() + cbar * U + dbar * W).substitute_x(sf.xbar0, sf.xbar1) * beta;
  return TestPolynomial::in_frame(sf.frame,
                                  {{{-kInf, kInf}, ((lead + rest) * (1.0 / beta)).trimmed()}});
}

double integrate_faceted(const Tri& K, const std::vector<Interface>& cuts,
                         const std::function<double(const Point2&)>& f, const QuadRule& rule) {
  if (cuts.empty()) return integrate_tri(f, K, rule);
  double s = 0;
  for (const Polygon& piece : split_polygon({K[0], K[1], K[2]}, cuts))
    for (const Tri& t : fan_triangulate(piece)) s += integrate_tri(f, t, rule);
  return s;
}

namespace {

std::vector<Interface> merged_cuts(const TestPolynomial& v, const TestPolynomial& z) {
  std::vector<Interface> cuts = v.break_interfaces();
  const std::vector<Interface> zc = z.break_interfaces();
  cuts.insert(cuts.end(), zc.begin(), zc.end());
  return cuts;
}

}  // namespace

double modified_inner_product(const Tri& K, const Point2& bbar, const TestPolynomial& v,
                              const TestPolynomial& z, int quad_degree) {
  const double beta = norm(bbar);
  require_equivalence_regime(K, beta);
  const std::vector<Interface> cuts = merged_cuts(v, z);
  const QuadRule vol = triangle_rule(std::min(quad_degree, 10));
  double s = integrate_faceted(
      K, cuts, [&](const Point2& x) { return v.dir_deriv(x, bbar) * z.dir_deriv(x, bbar); }, vol);

  const Polygon kp = {K[0], K[1], K[2]};
  const QuadRule erule = edge_rule(std::min(quad_degree, 40));
  for (int e = 0; e < 3; ++e) {
    const Point2 A = K[e], B = K[(e + 1) % 3];
    const Point2 n = outward_normal(A, B);
    const double flux = dot(bbar, n);
    if (flux >= -kCharacteristicTol * beta) continue;  // only the inflow part
    std::vector<double> ts = segment_crossings(A, B, cuts);
    ts.insert(ts.begin(), 0.0);
    ts.push_back(1.0);
    for (size_t k = 0; k + 1 < ts.size(); ++k) {
      const Point2 P = A + ts[k] * (B - A);
      const Point2 Q = A + ts[k + 1] * (B - A);
      s += integrate_edge(
          [&](const Point2& x) {
            const RayExit re = ray_exit(kp, bbar, x);
            return v.eval(x) * z.eval(x) * std::abs(flux / beta) * (re.x_plus - re.x_minus);
          },
          P, Q, erule);
    }
  }
  return s;
}

double perturbed_local_bform(const Tri& K, const Point2& bbar, double cbar, double dbar,
                             const Poly2& u, const Poly2& w, const TestPolynomial& v,
                             int quad_degree) {
  const Poly2 wdir = w.ddir(bbar);
  const QuadRule vol = triangle_rule(std::min(quad_degree, 10));
  return integrate_faceted(
      K, v.break_interfaces(),
      [&](const Point2& x) {
        const double uv = u.eval(x), wv = w.eval(x), vv = v.eval(x);
        return cbar * vv * uv + (wv - uv) * v.dir_deriv(x, bbar) + vv * wdir.eval(x) +
               dbar * vv * wv;
      },
      vol);
}

double hb_norm_sq(const Tri& K, const Point2& bbar, const TestPolynomial& v, int quad_degree) {
  const QuadRule vol = triangle_rule(std::min(quad_degree, 10));
  return integrate_faceted(
      K, v.break_interfaces(),
      [&](const Point2& x) {
        const double vv = v.eval(x), dv = v.dir_deriv(x, bbar);
        return vv * vv + dv * dv;
      },
      vol);
}

double hb_dist_sq(const Tri& K, const Point2& bbar, const TestPolynomial& v,
                  const TestPolynomial& z, int quad_degree) {
  const QuadRule vol = triangle_rule(std::min(quad_degree, 10));
  return integrate_faceted(
      K, merged_cuts(v, z),
      [&](const Point2& x) {
        const double dv = v.eval(x) - z.eval(x);
        const double dd = v.dir_deriv(x, bbar) - z.dir_deriv(x, bbar);
        return dv * dv + dd * dd;
      },
      vol);
}

}  // namespace dpg
