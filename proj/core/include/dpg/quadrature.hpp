#pragma once

#include <functional>
#include <vector>

#include "dpg/geometry.hpp"

namespace dpg {

/// Quadrature rule on the reference triangle {x,y >= 0, x+y <= 1}
/// (weights sum to 1/2) or on the reference edge [0,1] (weights sum to 1).
struct QuadRule {
  std::vector<Point2> points;  // edge rules use .x, .y == 0
  std::vector<double> weights;
  int exactness_degree = 0;

  size_t size() const { return points.size(); }
};

/// Gauss-Legendre nodes/weights on [0,1], exact for degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule exact for all bivariate polynomials of total degree <= degree on the
/// reference triangle. Supported range 0..10. Exactness is verified against
/// the monomial integrals at construction.
QuadRule triangle_rule(int degree);

/// Gauss-Legendre rule on [0,1], exact to the given degree. Range 0..40.
QuadRule edge_rule(int degree);

/// Exact integral of x^p y^q over the reference triangle: p! q! / (p+q+2)!.
double monomial_integral_tri(int p, int q);

/// Integral of f over a physical triangle via affine push-forward.
double integrate_tri(const std::function<double(const Point2&)>& f, const Tri& K,
                     const QuadRule& rule);

/// Integral of f along the segment a->b.
double integrate_edge(const std::function<double(const Point2&)>& f, const Point2& a,
                      const Point2& b, const QuadRule& rule);

/// Discontinuity interface: the line n.x = offset or a circle.
struct Interface {
  enum class Kind { line, circle };
  Kind kind = Kind::line;
  Point2 normal;       // line
  double offset = 0;   // line
  Point2 center;       // circle
  double radius = 0;   // circle

  static Interface line(const Point2& n, double off) {
    Interface i;
    i.kind = Kind::line;
    i.normal = n;
    i.offset = off;
    return i;
  }
  static Interface circle(const Point2& c, double r) {
    Interface i;
    i.kind = Kind::circle;
    i.center = c;
    i.radius = r;
    return i;
  }
};

/// Partition of a convex polygon into pieces on which every interface keeps a
/// fixed sign. Circles are replaced by inscribed polylines with sagitta
/// <= 1e-6 * radius.
std::vector<Polygon> split_polygon(const Polygon& poly, const std::vector<Interface>& interfaces);

/// Integral over K of a piecewise-smooth f whose discontinuity set is
/// described by `interfaces`; each smooth piece is sub-triangulated and
/// integrated with the given rule.
double integrate_split(const std::function<double(const Point2&)>& f, const Tri& K,
                       const QuadRule& rule, const std::vector<Interface>& interfaces);

/// Parameters t in (0,1) where the segment a + t(b-a) crosses an interface.
std::vector<double> segment_crossings(const Point2& a, const Point2& b,
                                      const std::vector<Interface>& interfaces);

/// Edge integral split at interface crossings.
double integrate_edge_split(const std::function<double(const Point2&)>& f, const Point2& a,
                            const Point2& b, const QuadRule& rule,
                            const std::vector<Interface>& interfaces);

}  // namespace dpg
