#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dpg/problem.hpp"

using namespace dpg;

namespace {

TriMesh single_reference_triangle() {
  TriMesh m;
  m.vertices = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{{0, 1, 2}, -1, 0}};
  m.finalize();
  return m;
}

double interface_distance(const Point2& x, const std::vector<Interface>& itf) {
  double d = 1e300;
  for (const Interface& i : itf) {
    if (i.kind == Interface::Kind::line)
      d = std::min(d, std::abs(dot(i.normal, x) - i.offset) / norm(i.normal));
    else
      d = std::min(d, std::abs(norm(x - i.center) - i.radius));
  }
  return d;
}

// |b.grad u + c u - f| at x, gradient by central differences.
double strong_residual(const TransportProblem& p, const Point2& x) {
  const double h = 1e-5;
  const auto& u = *p.exact_u;
  const double ux = (u.eval({x.x + h, x.y}) - u.eval({x.x - h, x.y})) / (2 * h);
  const double uy = (u.eval({x.x, x.y + h}) - u.eval({x.x, x.y - h})) / (2 * h);
  const Point2 b = p.b(x);
  return std::abs(b.x * ux + b.y * uy + p.c(x) * u.eval(x) - p.f.eval(x));
}

}  // namespace

TEST_CASE("cell averages: constant and linear fields") {
  TransportProblem p;
  p.b = [](const Point2&) { return Point2{1, 1}; };
  p.div_b = [](const Point2&) { return 0.0; };
  p.c = [](const Point2&) { return 0.0; };
  const TriMesh mesh = build_structured_mesh(2);
  const CellData cd = cell_averages(p, mesh, 4);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    CHECK(cd.bbar[static_cast<size_t>(t)].x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cd.bbar[static_cast<size_t>(t)].y == doctest::Approx(1.0).epsilon(1e-14));
  }

  TransportProblem rot;
  rot.b = [](const Point2& x) { return Point2{x.y, -x.x}; };
  rot.div_b = [](const Point2&) { return 0.0; };
  rot.c = [](const Point2&) { return 0.0; };
  const TriMesh ref = single_reference_triangle();
  const CellData cr = cell_averages(rot, ref, 4);
  CHECK(cr.bbar[0].x == doctest::Approx(1.0 / 3.0).epsilon(1e-14));  // linear field: centroid value
  CHECK(cr.bbar[0].y == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(cr.cbar[0] == doctest::Approx(0.0));
  CHECK(cr.dbar[0] == doctest::Approx(0.0));
}

TEST_CASE("cell averages equal centroid values for linear fields on every cell") {
  TransportProblem rot = benchmark_exp3();
  const TriMesh mesh = build_structured_mesh(4);
  const CellData cd = cell_averages(rot, mesh, 6);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Point2 c = mesh.tri_geometry(t).centroid();
    CHECK(std::abs(cd.bbar[static_cast<size_t>(t)].x - c.y) < 1e-14);
    CHECK(std::abs(cd.bbar[static_cast<size_t>(t)].y + c.x) < 1e-14);
  }
}

TEST_CASE("experiment 1: exact solution values") {
  const TransportProblem p = benchmark_exp1({1, 1});
  CHECK(p.exact_u->eval({0.5, 0.5}) == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
  CHECK(p.exact_u->eval({1.0, 0.0}) == doctest::Approx(0.0));

  const TransportProblem ph = benchmark_exp1({1, 0});
  CHECK(ph.exact_u->eval({1.0, 0.3}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ph.exact_u->eval({1.0, 0.9}) == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS(benchmark_exp1({0, 1}));
  CHECK_THROWS(benchmark_exp1({1, -0.5}));
}

TEST_CASE("experiment 2: exact solution values") {
  const TransportProblem p = benchmark_exp2({1, 1});
  CHECK(p.exact_u->eval({0.0, 0.5}) == doctest::Approx(0.0));
  CHECK(p.exact_u->eval({0.5, 0.5}) == doctest::Approx(0.0));
  CHECK(p.f.eval({0.5, 0.5}) == doctest::Approx(0.0));

  const TransportProblem ph = benchmark_exp2({1, 0});
  CHECK(ph.exact_u->eval({0.5, 0.5}) == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
  CHECK(ph.f.eval({0.5, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("experiment 3: field and annulus solution") {
  const TransportProblem p = benchmark_exp3();
  CHECK(p.exact_u->eval({0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(p.exact_u->eval({0.1, 0.1}) == doctest::Approx(0.0));
  const Point2 b = p.b({1, 0});
  CHECK(b.x == doctest::Approx(0.0));
  CHECK(b.y == doctest::Approx(-1.0));
  REQUIRE(p.g_bar.has_value());
  CHECK(p.g_bar->eval({0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(p.g_bar->interfaces.size() == 2);
}

TEST_CASE("strong equation holds on smooth-region samples") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unif(0.02, 0.98);
  for (const TransportProblem& p :
       {benchmark_exp1({1, 1}), benchmark_exp1({1, 0.0625}), benchmark_exp2({1, 1}),
        benchmark_exp3()}) {
    int checked = 0;
    while (checked < 40) {
      const Point2 x{unif(rng), unif(rng)};
      if (interface_distance(x, p.exact_u->interfaces) < 0.01) continue;
      CHECK(strong_residual(p, x) <= 1e-8);
      ++checked;
    }
  }
}

TEST_CASE("exact solution matches the inflow data") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> unif(0.01, 0.99);
  {
    const TransportProblem p = benchmark_exp1({1, 1});  // inflow: x=0 and y=0
    for (int k = 0; k < 20; ++k) {
      CHECK(p.exact_u->eval({0.0, unif(rng)}) == doctest::Approx(0.0));
      CHECK(p.exact_u->eval({unif(rng), 0.0}) == doctest::Approx(0.0));
    }
  }
  {
    const TransportProblem p = benchmark_exp3();  // inflow: x=0 and y=1
    for (int k = 0; k < 20; ++k) {
      const double y = unif(rng);
      if (std::abs(y - 0.25) > 0.01)
        CHECK(p.exact_u->eval({0.0, y}) == doctest::Approx(p.g({0.0, y})));
      const double x = unif(rng);
      if (x > 0.01) CHECK(p.exact_u->eval({x, 1.0}) == doctest::Approx(p.g({x, 1.0})));
    }
  }
}
