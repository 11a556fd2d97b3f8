#include "dpg/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace dpg {

CellData cell_averages(const TransportProblem& problem, const TriMesh& mesh, int quad_degree) {
  const QuadRule rule = triangle_rule(quad_degree);
  CellData data;
  data.bbar.resize(static_cast<size_t>(mesh.n_triangles()));
  data.cbar.resize(static_cast<size_t>(mesh.n_triangles()));
  data.dbar.resize(static_cast<size_t>(mesh.n_triangles()));
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Tri K = mesh.tri_geometry(t);
    const double area = K.area();
    const double bx = integrate_tri([&](const Point2& x) { return problem.b(x).x; }, K, rule);
    const double by = integrate_tri([&](const Point2& x) { return problem.b(x).y; }, K, rule);
    const double d = integrate_tri(problem.div_b, K, rule);
    const double c = integrate_tri(problem.c, K, rule);
    data.bbar[static_cast<size_t>(t)] = Point2{bx, by} / area;
    data.dbar[static_cast<size_t>(t)] = d / area;
    data.cbar[static_cast<size_t>(t)] = (c - d) / area;
  }
  return data;
}

TransportProblem benchmark_exp1(const Point2& b) {
  if (!(b.x > 0) || b.y < 0)
    throw std::invalid_argument("benchmark_exp1: requires b1 > 0 and b2 >= 0");
  TransportProblem p;
  p.name = "exp1";
  p.b = [b](const Point2&) { return b; };
  p.div_b = [](const Point2&) { return 0.0; };
  p.c = [](const Point2&) { return 0.0; };
  p.f.eval = [](const Point2& x) { return 1.0 - x.x; };
  p.g = [](const Point2&) { return 0.0; };

  PiecewiseScalar u;
  // Kink across b . x_perp = 0, i.e. -b2 x1 + b1 x2 = 0; for b2 = 0 the line
  // coincides with the bottom edge and only the upper branch is active.
  u.interfaces = {Interface::line({-b.y, b.x}, 0.0)};
  u.eval = [b](const Point2& x) {
    if (-b.y * x.x + b.x * x.y >= 0 || b.y == 0.0)
      return x.x / b.x - x.x * x.x / (2 * b.x);
    return x.y / b.y - x.y * (2 * b.y * x.x - b.x * x.y) / (2 * b.y * b.y);
  };
  p.exact_u = u;
  return p;
}

TransportProblem benchmark_exp2(const Point2& b) {
  if (!(b.x > 0) || b.y < 0)
    throw std::invalid_argument("benchmark_exp2: requires b1 > 0 and b2 >= 0");
  TransportProblem p;
  p.name = "exp2";
  p.b = [b](const Point2&) { return b; };
  p.div_b = [](const Point2&) { return 0.0; };
  p.c = [](const Point2&) { return 0.0; };
  const Interface cut = Interface::line({-b.y, b.x}, 0.25);
  p.f.interfaces = {cut};
  p.f.eval = [b](const Point2& x) {
    return (-b.y * x.x + b.x * x.y >= 0.25) ? 1.0 - x.x : 0.0;
  };
  p.g = [](const Point2&) { return 0.0; };

  PiecewiseScalar u;
  u.interfaces = {cut};
  u.eval = [b](const Point2& x) {
    return (-b.y * x.x + b.x * x.y >= 0.25) ? x.x / b.x - x.x * x.x / (2 * b.x) : 0.0;
  };
  p.exact_u = u;
  return p;
}

TransportProblem benchmark_exp3() {
  TransportProblem p;
  p.name = "exp3";
  p.b = [](const Point2& x) { return Point2{x.y, -x.x}; };
  p.div_b = [](const Point2&) { return 0.0; };
  p.c = [](const Point2&) { return 0.0; };
  p.f.eval = [](const Point2&) { return 0.0; };
  // Inflow data: 1 on the left edge above x2 = 1/4, 0 elsewhere (in
  // particular on the top edge).
  p.g = [](const Point2& x) { return (x.x <= 1e-12 && x.y >= 0.25) ? 1.0 : 0.0; };

  PiecewiseScalar annulus;
  annulus.interfaces = {Interface::circle({0, 0}, 0.25), Interface::circle({0, 0}, 1.0)};
  annulus.eval = [](const Point2& x) {
    const double r = norm(x);
    return (r >= 0.25 && r <= 1.0) ? 1.0 : 0.0;
  };
  p.g_bar = annulus;   // lies in H(b;Omega): its jumps follow characteristics
  p.exact_u = annulus;
  return p;
}

}  // namespace dpg
