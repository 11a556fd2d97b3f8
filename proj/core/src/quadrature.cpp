#include "dpg/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpg {

Polygon clip_halfplane(const Polygon& poly, const Point2& n, double offset) {
  Polygon out;
  const size_t sz = poly.size();
  for (size_t i = 0; i < sz; ++i) {
    const Point2& cur = poly[i];
    const Point2& nxt = poly[(i + 1) % sz];
    const double dc = dot(n, cur) - offset;
    const double dn = dot(n, nxt) - offset;
    if (dc >= 0) out.push_back(cur);
    if ((dc > 0 && dn < 0) || (dc < 0 && dn > 0)) {
      const double t = dc / (dc - dn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  if (out.size() < 3 || std::abs(polygon_area(out)) < 1e-300) return {};
  return out;
}

std::vector<Tri> fan_triangulate(const Polygon& poly) {
  std::vector<Tri> tris;
  for (size_t i = 1; i + 1 < poly.size(); ++i)
    tris.push_back(Tri(poly[0], poly[i], poly[i + 1]));
  return tris;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  nodes.resize(static_cast<size_t>(n));
  weights.resize(static_cast<size_t>(n));
  if (n == 1) {
    nodes[0] = 0.5;
    weights[0] = 1.0;
    return;
  }
  // Golub-Welsch on the symmetric Jacobi matrix for [-1,1].
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double bk = k / std::sqrt(4.0 * k * k - 1.0);
    J(k - 1, k) = bk;
    J(k, k - 1) = bk;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<size_t>(i)] = (es.eigenvalues()(i) + 1.0) / 2.0;
    const double v0 = es.eigenvectors()(0, i);
    weights[static_cast<size_t>(i)] = v0 * v0;  // 2*v0^2 scaled by 1/2 for [0,1]
  }
}

double monomial_integral_tri(int p, int q) {
  // p! q! / (p+q+2)! evaluated without overflow.
  double val = 1.0;
  for (int k = 1; k <= p + q + 2; ++k) val /= k;
  for (int k = 2; k <= p; ++k) val *= k;
  for (int k = 2; k <= q; ++k) val *= k;
  return val;
}

namespace {

void verify_triangle_exactness(const QuadRule& r) {
  for (int p = 0; p + 0 <= r.exactness_degree; ++p)
    for (int q = 0; p + q <= r.exactness_degree; ++q) {
      double s = 0;
      for (size_t i = 0; i < r.size(); ++i)
        s += r.weights[i] * std::pow(r.points[i].x, p) * std::pow(r.points[i].y, q);
      const double exact = monomial_integral_tri(p, q);
      if (std::abs(s - exact) > 1e-13 * std::max(1.0, std::abs(exact)))
        throw std::runtime_error("triangle_rule: exactness verification failed");
    }
}

}  // namespace

QuadRule triangle_rule(int degree) {
  if (degree < 0 || degree > 10)
    throw std::invalid_argument("triangle_rule: degree must be in 0..10");
  QuadRule r;
  r.exactness_degree = degree;
  if (degree <= 1) {
    r.points = {{1.0 / 3.0, 1.0 / 3.0}};
    r.weights = {0.5};
  } else if (degree == 2) {
    r.points = {{0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
    r.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  } else {
    // Conical product: x = s(1-t), y = t with Gauss points in s and t; the
    // (1-t) area factor is absorbed by raising the t-direction degree by one.
    const int ns = (degree + 2) / 2;
    const int nt = (degree + 3) / 2;
    std::vector<double> xs, ws, xt, wt;
    gauss_legendre(ns, xs, ws);
    gauss_legendre(nt, xt, wt);
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < nt; ++j) {
        const double s = xs[static_cast<size_t>(i)], t = xt[static_cast<size_t>(j)];
        r.points.push_back({s * (1.0 - t), t});
        r.weights.push_back(ws[static_cast<size_t>(i)] * wt[static_cast<size_t>(j)] * (1.0 - t));
      }
  }
  verify_triangle_exactness(r);
  return r;
}

QuadRule edge_rule(int degree) {
  if (degree < 0 || degree > 40)
    throw std::invalid_argument("edge_rule: degree must be in 0..40");
  QuadRule r;
  r.exactness_degree = degree;
  std::vector<double> x, w;
  gauss_legendre((degree + 2) / 2, x, w);
  for (size_t i = 0; i < x.size(); ++i) {
    r.points.push_back({x[i], 0.0});
    r.weights.push_back(w[i]);
  }
  return r;
}

double integrate_tri(const std::function<double(const Point2&)>& f, const Tri& K,
                     const QuadRule& rule) {
  const AffineMap F(K);
  const double jac = std::abs(F.det());
  double s = 0;
  for (size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(F.apply(rule.points[i]));
  return s * jac;
}

double integrate_edge(const std::function<double(const Point2&)>& f, const Point2& a,
                      const Point2& b, const QuadRule& rule) {
  const double len = norm(b - a);
  double s = 0;
  for (size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(a + rule.points[i].x * (b - a));
  return s * len;
}

namespace {

constexpr double kSagittaTol = 1e-6;

bool point_in_polygon(const Polygon& poly, const Point2& p) {
  for (size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    if (cross(b - a, p - a) < 0) return false;
  }
  return true;
}

// Splits each polygon in `pieces` by the chord lines of an inscribed polyline
// approximating the circle over the angular range subtended by the polygon.
std::vector<Polygon> split_by_circle(const std::vector<Polygon>& pieces, const Point2& c,
                                     double radius) {
  std::vector<Polygon> out;
  for (const Polygon& poly : pieces) {
    double dmin = 1e300, dmax = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
      const Point2& a = poly[i];
      const Point2& b = poly[(i + 1) % poly.size()];
      dmax = std::max(dmax, norm(a - c));
      // distance from c to segment ab
      const Point2 d = b - a;
      const double t = std::clamp(dot(c - a, d) / dot(d, d), 0.0, 1.0);
      dmin = std::min(dmin, norm(a + t * d - c));
    }
    if (point_in_polygon(poly, c)) dmin = 0;
    if (dmax <= radius || dmin >= radius) {  // circle does not cross this piece
      out.push_back(poly);
      continue;
    }
    // Angular range of the piece as seen from the center.
    double amin = 0, amax = 2 * M_PI;
    if (dmin > 0) {
      const Point2 mu = (poly[0] + poly[1] + poly[2]) / static_cast<double>(3) - c;
      const double base = std::atan2(mu.y, mu.x);
      amin = 1e300;
      amax = -1e300;
      for (const Point2& v : poly) {
        double a = std::atan2(v.y - c.y, v.x - c.x) - base;
        while (a > M_PI) a -= 2 * M_PI;
        while (a < -M_PI) a += 2 * M_PI;
        amin = std::min(amin, base + a);
        amax = std::max(amax, base + a);
      }
    }
    const double dtheta = 2.0 * std::acos(1.0 - kSagittaTol);
    const int nseg = std::max(2, static_cast<int>(std::ceil((amax - amin) / dtheta)));
    const double pad = (amax - amin) / nseg;
    std::vector<Polygon> inside = {poly};
    for (int k = 0; k < nseg; ++k) {
      const double a0 = amin - pad / 2 + (amax - amin + pad) * k / nseg;
      const double a1 = amin - pad / 2 + (amax - amin + pad) * (k + 1) / nseg;
      const Point2 p0 = c + radius * Point2{std::cos(a0), std::sin(a0)};
      const Point2 p1 = c + radius * Point2{std::cos(a1), std::sin(a1)};
      // Inside of the disc lies on the center side of the chord.
      Point2 n = outward_normal(p0, p1);
      double off = dot(n, p0);
      if (dot(n, c) - off > 0) {
      } else {
        n = {-n.x, -n.y};
        off = -off;
      }
      std::vector<Polygon> next_inside;
      for (const Polygon& piece : inside) {
        Polygon outside = clip_halfplane(piece, {-n.x, -n.y}, -off);
        if (!outside.empty()) out.push_back(outside);
        Polygon in = clip_halfplane(piece, n, off);
        if (!in.empty()) next_inside.push_back(in);
      }
      inside = std::move(next_inside);
    }
    for (Polygon& piece : inside) out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace

std::vector<Polygon> split_polygon(const Polygon& poly, const std::vector<Interface>& interfaces) {
  std::vector<Polygon> pieces = {poly};
  for (const Interface& itf : interfaces) {
    if (itf.kind == Interface::Kind::line) {
      std::vector<Polygon> next;
      for (const Polygon& p : pieces) {
        Polygon above = clip_halfplane(p, itf.normal, itf.offset);
        Polygon below = clip_halfplane(p, {-itf.normal.x, -itf.normal.y}, -itf.offset);
        const bool had_above = !above.empty(), had_below = !below.empty();
        if (had_above) next.push_back(std::move(above));
        if (had_below) next.push_back(std::move(below));
        if (!had_above && !had_below) next.push_back(p);
      }
      pieces = std::move(next);
    } else {
      pieces = split_by_circle(pieces, itf.center, itf.radius);
    }
  }
  return pieces;
}

namespace {

// Rules whose points touch the reference boundary (the 3-point midpoint rule)
// would sample a discontinuous integrand exactly on piece boundaries; split
// integration substitutes a strictly interior rule of the same exactness.
QuadRule interior_rule(const QuadRule& rule) {
  bool interior = true;
  for (const Point2& p : rule.points)
    interior &= p.x > 1e-14 && p.y > 1e-14 && p.x + p.y < 1.0 - 1e-14;
  if (interior) return rule;
  return triangle_rule(std::max(3, rule.exactness_degree + 1));
}

}  // namespace

double integrate_split(const std::function<double(const Point2&)>& f, const Tri& K,
                       const QuadRule& rule, const std::vector<Interface>& interfaces) {
  if (interfaces.empty()) return integrate_tri(f, K, rule);
  const QuadRule inner = interior_rule(rule);
  const Polygon poly = {K[0], K[1], K[2]};
  double s = 0;
  for (const Polygon& piece : split_polygon(poly, interfaces))
    for (const Tri& t : fan_triangulate(piece)) s += integrate_tri(f, t, inner);
  return s;
}

std::vector<double> segment_crossings(const Point2& a, const Point2& b,
                                      const std::vector<Interface>& interfaces) {
  std::vector<double> ts;
  const Point2 d = b - a;
  for (const Interface& itf : interfaces) {
    if (itf.kind == Interface::Kind::line) {
      const double dn = dot(itf.normal, d);
      if (dn == 0) continue;
      const double t = (itf.offset - dot(itf.normal, a)) / dn;
      if (t > 0 && t < 1) ts.push_back(t);
    } else {
      // |a + t d - c|^2 = r^2
      const Point2 ac = a - itf.center;
      const double A = dot(d, d), B = 2 * dot(ac, d), C = dot(ac, ac) - itf.radius * itf.radius;
      const double disc = B * B - 4 * A * C;
      if (disc <= 0) continue;
      const double sq = std::sqrt(disc);
      for (double t : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)})
        if (t > 0 && t < 1) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  return ts;
}

double integrate_edge_split(const std::function<double(const Point2&)>& f, const Point2& a,
                            const Point2& b, const QuadRule& rule,
                            const std::vector<Interface>& interfaces) {
  std::vector<double> ts = segment_crossings(a, b, interfaces);
  ts.insert(ts.begin(), 0.0);
  ts.push_back(1.0);
  double s = 0;
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    const Point2 p = a + ts[i] * (b - a);
    const Point2 q = a + ts[i + 1] * (b - a);
    s += integrate_edge(f, p, q, rule);
  }
  return s;
}

}  // namespace dpg
