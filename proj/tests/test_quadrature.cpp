#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dpg/poly2.hpp"
#include "dpg/quadrature.hpp"

using namespace dpg;

TEST_CASE("triangle rule: low-degree layouts") {
  const QuadRule r1 = triangle_rule(1);
  REQUIRE(r1.size() == 1);
  CHECK(r1.points[0].x == doctest::Approx(1.0 / 3.0));
  CHECK(r1.points[0].y == doctest::Approx(1.0 / 3.0));
  CHECK(r1.weights[0] == doctest::Approx(0.5));

  const QuadRule r2 = triangle_rule(2);
  REQUIRE(r2.size() == 3);
  double sx2 = 0;
  for (size_t i = 0; i < 3; ++i) sx2 += r2.weights[i] * r2.points[i].x * r2.points[i].x;
  CHECK(sx2 == doctest::Approx(1.0 / 12.0).epsilon(1e-14));  // exact: 2!0!/4!
}

TEST_CASE("triangle rule: x^2 y^2 at degree 4") {
  const QuadRule r = triangle_rule(4);
  double s = 0;
  for (size_t i = 0; i < r.size(); ++i)
    s += r.weights[i] * std::pow(r.points[i].x, 2) * std::pow(r.points[i].y, 2);
  CHECK(s == doctest::Approx(1.0 / 180.0).epsilon(1e-14));  // 2!2!/6!
}

TEST_CASE("triangle rule: monomial exactness, positivity, weight sum") {
  for (int d = 0; d <= 10; ++d) {
    const QuadRule r = triangle_rule(d);
    double wsum = 0;
    for (double w : r.weights) {
      CHECK(w > 0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int p = 0; p <= d; ++p)
      for (int q = 0; p + q <= d; ++q) {
        double s = 0;
        for (size_t i = 0; i < r.size(); ++i)
          s += r.weights[i] * std::pow(r.points[i].x, p) * std::pow(r.points[i].y, q);
        const double exact = monomial_integral_tri(p, q);
        CHECK(std::abs(s - exact) <= 1e-14 * std::max(1.0, std::abs(exact)));
      }
  }
}

TEST_CASE("triangle rule: range errors") {
  CHECK_THROWS(triangle_rule(-1));
  CHECK_THROWS(triangle_rule(11));
}

TEST_CASE("edge rule: Gauss points and analytic integrals") {
  const QuadRule r1 = edge_rule(1);
  REQUIRE(r1.size() == 1);
  CHECK(r1.points[0].x == doctest::Approx(0.5));
  CHECK(r1.weights[0] == doctest::Approx(1.0));

  const QuadRule r3 = edge_rule(3);
  REQUIRE(r3.size() == 2);
  double s3 = 0;
  for (size_t i = 0; i < r3.size(); ++i) s3 += r3.weights[i] * std::pow(r3.points[i].x, 3);
  CHECK(s3 == doctest::Approx(0.25).epsilon(1e-14));

  const QuadRule r5 = edge_rule(5);
  REQUIRE(r5.size() == 3);
  double s5 = 0;
  for (size_t i = 0; i < r5.size(); ++i) s5 += r5.weights[i] * std::pow(r5.points[i].x, 5);
  CHECK(s5 == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  for (int d = 0; d <= 20; ++d) {
    const QuadRule r = edge_rule(d);
    for (int p = 0; p <= d; ++p) {
      double s = 0;
      for (size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.points[i].x, p);
      CHECK(std::abs(s - 1.0 / (p + 1)) <= 1e-14);
    }
  }
  CHECK_THROWS(edge_rule(41));
}

TEST_CASE("affine push-forward matches reference integral") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const QuadRule rule = triangle_rule(6);
  for (int rep = 0; rep < 20; ++rep) {
    Poly2 p(3);
    for (int t = 0; t <= 3; ++t)
      for (int j = 0; j <= t; ++j) p.at(t - j, j) = unif(rng);
    Tri K;
    do {
      K = Tri({unif(rng), unif(rng)}, {unif(rng), unif(rng)}, {unif(rng), unif(rng)});
    } while (K.area() < 0.05);
    const AffineMap F(K);
    // Two routes: physical quadrature vs exact reference integral of p o F.
    const double via_quad = integrate_tri([&](const Point2& x) { return p.eval(x); }, K, rule);
    const Poly2 pref = p.compose_affine(F.origin.x, F.j00, F.j01, F.origin.y, F.j10, F.j11);
    const double via_ref = std::abs(F.det()) * pref.integral_ref();
    CHECK(via_quad == doctest::Approx(via_ref).epsilon(1e-12));
  }
}

TEST_CASE("split integration: half-plane clip of the reference triangle") {
  const Tri ref({0, 0}, {1, 0}, {0, 1});
  const std::vector<Interface> itf = {Interface::line({1, 0}, 0.5)};
  auto indicator = [](const Point2& x) { return x.x >= 0.5 ? 1.0 : 0.0; };
  const double area = integrate_split(indicator, ref, triangle_rule(2), itf);
  CHECK(area == doctest::Approx(0.125).epsilon(1e-13));  // triangle (1/2,0),(1,0),(1/2,1/2)
}

TEST_CASE("split integration: non-crossing interface degenerates to plain rule") {
  const Tri ref({0, 0}, {1, 0}, {0, 1});
  auto f = [](const Point2& x) { return std::sin(x.x) + x.y; };
  const QuadRule rule = triangle_rule(8);
  const double plain = integrate_tri(f, ref, rule);
  const double line_far = integrate_split(f, ref, rule, {Interface::line({1, 0}, 5.0)});
  CHECK(line_far == doctest::Approx(plain).epsilon(1e-14));
}

TEST_CASE("split integration: circle far from the triangle keeps full area") {
  const Tri K({2, 2}, {3, 2}, {2, 3});
  auto ind = [](const Point2& x) { return norm(x) >= 0.25 ? 1.0 : 0.0; };
  const double area = integrate_split(ind, K, triangle_rule(2), {Interface::circle({0, 0}, 0.25)});
  CHECK(area == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("split integration: quarter disc area via circle interface") {
  const Tri ref({0, 0}, {1, 0}, {0, 1});
  const std::vector<Interface> itf = {Interface::circle({0, 0}, 0.5)};
  auto ind = [](const Point2& x) { return norm(x) <= 0.5 ? 1.0 : 0.0; };
  const double area = integrate_split(ind, ref, triangle_rule(2), itf);
  CHECK(area == doctest::Approx(M_PI / 16.0).epsilon(1e-6));
}

TEST_CASE("segment crossings: line and circle") {
  const std::vector<Interface> itf = {Interface::line({1, 0}, 0.5),
                                      Interface::circle({0, 0}, 1.0)};
  const auto ts = segment_crossings({0, 0}, {2, 0}, itf);
  REQUIRE(ts.size() == 2);
  CHECK(ts[0] == doctest::Approx(0.25));
  CHECK(ts[1] == doctest::Approx(0.5));
}

TEST_CASE("edge split integration: indicator across a circle") {
  auto ind = [](const Point2& x) { return norm(x) <= 1.0 ? 1.0 : 0.0; };
  const double len =
      integrate_edge_split(ind, {0, 0}, {2, 0}, edge_rule(4), {Interface::circle({0, 0}, 1.0)});
  CHECK(len == doctest::Approx(1.0).epsilon(1e-13));
}
