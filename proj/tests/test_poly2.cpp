#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dpg/poly2.hpp"
#include "dpg/quadrature.hpp"

using namespace dpg;

namespace {

Poly2 random_poly(int deg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Poly2 p(deg);
  for (int t = 0; t <= deg; ++t)
    for (int j = 0; j <= t; ++j) p.at(t - j, j) = unif(rng);
  return p;
}

}  // namespace

TEST_CASE("arithmetic and evaluation") {
  std::mt19937_64 rng(11);
  const Poly2 p = random_poly(4, rng);
  const Poly2 q = random_poly(3, rng);
  const Point2 x{0.37, -0.61};
  CHECK((p + q).eval(x) == doctest::Approx(p.eval(x) + q.eval(x)).epsilon(1e-14));
  CHECK((p - q).eval(x) == doctest::Approx(p.eval(x) - q.eval(x)).epsilon(1e-14));
  CHECK((p * q).eval(x) == doctest::Approx(p.eval(x) * q.eval(x)).epsilon(1e-13));
  CHECK((p * 2.5).eval(x) == doctest::Approx(2.5 * p.eval(x)).epsilon(1e-14));
}

TEST_CASE("derivatives against central differences") {
  std::mt19937_64 rng(13);
  const Poly2 p = random_poly(5, rng);
  const double h = 1e-6;
  for (const Point2 x : {Point2{0.2, 0.3}, Point2{-0.4, 0.9}, Point2{0.8, -0.7}}) {
    const double fdx = (p.eval(x.x + h, x.y) - p.eval(x.x - h, x.y)) / (2 * h);
    const double fdy = (p.eval(x.x, x.y + h) - p.eval(x.x, x.y - h)) / (2 * h);
    CHECK(p.dx().eval(x) == doctest::Approx(fdx).epsilon(1e-6));
    CHECK(p.dy().eval(x) == doctest::Approx(fdy).epsilon(1e-6));
    const Point2 b{1.5, -0.5};
    CHECK(p.ddir(b).eval(x) ==
          doctest::Approx(b.x * p.dx().eval(x) + b.y * p.dy().eval(x)).epsilon(1e-13));
  }
}

TEST_CASE("antiderivative is a right inverse of d/dx") {
  std::mt19937_64 rng(17);
  const Poly2 p = random_poly(4, rng);
  const Poly2 back = p.antider_x().dx();
  for (const Point2 x : {Point2{0.1, 0.9}, Point2{-0.3, 0.4}})
    CHECK(back.eval(x) == doctest::Approx(p.eval(x)).epsilon(1e-13));
}

TEST_CASE("affine composition") {
  std::mt19937_64 rng(19);
  const Poly2 p = random_poly(4, rng);
  const double ax = 0.3, bx = 1.2, cx = -0.4, ay = -0.2, by = 0.5, cy = 0.9;
  const Poly2 q = p.compose_affine(ax, bx, cx, ay, by, cy);
  for (const Point2 x : {Point2{0.25, 0.5}, Point2{-0.75, 0.1}}) {
    const double expect = p.eval(ax + bx * x.x + cx * x.y, ay + by * x.x + cy * x.y);
    CHECK(q.eval(x) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("substitute_x collapses the x-dependence") {
  std::mt19937_64 rng(23);
  const Poly2 p = random_poly(4, rng);
  const Poly2 s = p.substitute_x(0.7, -1.3);
  for (double y : {0.0, 0.4, -0.9})
    CHECK(s.eval(12.34, y) == doctest::Approx(p.eval(0.7 - 1.3 * y, y)).epsilon(1e-12));
}

TEST_CASE("difference quotient is the polynomial divided difference") {
  std::mt19937_64 rng(29);
  const Poly2 p = random_poly(5, rng);
  const double a0 = -0.2, a1 = 0.6, b0 = 0.9, b1 = -0.3;
  const Poly2 dq = p.difference_quotient(a0, a1, b0, b1);
  for (double y : {0.0, 0.35, -0.8}) {
    const double alpha = a0 + a1 * y, beta = b0 + b1 * y;
    const double expect = (p.eval(beta, y) - p.eval(alpha, y)) / (beta - alpha);
    CHECK(dq.eval(0.0, y) == doctest::Approx(expect).epsilon(1e-11));
  }
  // Well-defined where alpha == beta: matches the x-derivative there.
  const double ys = (b0 - a0) / (a1 - b1);  // alpha(ys) == beta(ys)
  const double xs = a0 + a1 * ys;
  CHECK(dq.eval(0.0, ys) == doctest::Approx(p.dx().eval(xs, ys)).epsilon(1e-10));
}

TEST_CASE("reference-triangle integral matches the monomial formula") {
  Poly2 p(3);
  p.at(2, 1) = 4.0;
  p.at(0, 0) = 1.0;
  CHECK(p.integral_ref() ==
        doctest::Approx(4.0 * monomial_integral_tri(2, 1) + 0.5).epsilon(1e-15));
}

TEST_CASE("frame rotation keeps point values") {
  std::mt19937_64 rng(31);
  const Poly2 p = random_poly(3, rng);
  const Frame fr(Point2{2.0, 1.0});
  const Poly2 q = to_frame_poly(p, fr);
  for (const Point2 x : {Point2{0.3, 0.8}, Point2{-0.5, 0.2}})
    CHECK(q.eval(fr.to_frame(x)) == doctest::Approx(p.eval(x)).epsilon(1e-12));
}
