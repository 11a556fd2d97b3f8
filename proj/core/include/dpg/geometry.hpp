#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dpg {

/// Planar point / vector with the usual arithmetic.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2() = default;
  Point2(double x_, double y_) : x(x_), y(y_) {}

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  Point2 operator/(double s) const { return {x / s, y / s}; }
  Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
};

inline Point2 operator*(double s, const Point2& p) { return p * s; }
inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline Point2 midpoint(const Point2& a, const Point2& b) { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }

/// Outward unit normal of the directed segment a->b for a CCW polygon.
inline Point2 outward_normal(const Point2& a, const Point2& b) {
  const Point2 d = b - a;
  const double len = norm(d);
  return {d.y / len, -d.x / len};
}

struct Tri {
  std::array<Point2, 3> v;

  Tri() = default;
  Tri(const Point2& a, const Point2& b, const Point2& c) : v{{a, b, c}} {}

  const Point2& operator[](int i) const { return v[static_cast<size_t>(i)]; }
  Point2& operator[](int i) { return v[static_cast<size_t>(i)]; }

  double signed_area() const { return cross(v[1] - v[0], v[2] - v[0]) / 2.0; }
  double area() const { return std::abs(signed_area()); }
  Point2 centroid() const { return (v[0] + v[1] + v[2]) / 3.0; }

  double diameter() const {
    return std::max({norm(v[1] - v[0]), norm(v[2] - v[1]), norm(v[0] - v[2])});
  }
  /// Inradius r = 2|K| / perimeter.
  double inradius() const {
    const double p = norm(v[1] - v[0]) + norm(v[2] - v[1]) + norm(v[0] - v[2]);
    return 2.0 * area() / p;
  }
};

/// Affine reference-to-physical map x = v0 + J * x_ref for the unit triangle
/// with vertices (0,0), (1,0), (0,1).
struct AffineMap {
  Point2 origin;
  // Column-major Jacobian: columns are edge vectors v1-v0 and v2-v0.
  double j00, j10, j01, j11;

  explicit AffineMap(const Tri& t)
      : origin(t[0]),
        j00(t[1].x - t[0].x), j10(t[1].y - t[0].y),
        j01(t[2].x - t[0].x), j11(t[2].y - t[0].y) {}

  double det() const { return j00 * j11 - j01 * j10; }

  Point2 apply(const Point2& ref) const {
    return {origin.x + j00 * ref.x + j01 * ref.y,
            origin.y + j10 * ref.x + j11 * ref.y};
  }
  Point2 invert(const Point2& phys) const {
    const double d = det();
    const double rx = phys.x - origin.x, ry = phys.y - origin.y;
    return {(j11 * rx - j01 * ry) / d, (-j10 * rx + j00 * ry) / d};
  }
  /// Pulls a physical gradient back: grad_ref = J^T grad_phys, or pushes
  /// forward grad_phys = J^{-T} grad_ref.
  Point2 push_gradient(const Point2& grad_ref) const {
    const double d = det();
    return {(j11 * grad_ref.x - j10 * grad_ref.y) / d,
            (-j01 * grad_ref.x + j00 * grad_ref.y) / d};
  }
};

/// Rotation taking the unit vector dir/|dir| onto e1; maps ambient
/// coordinates to "frame" coordinates in which the field points along +x.
struct Frame {
  double c = 1.0, s = 0.0;  // cos/sin of the rotation angle

  Frame() = default;
  explicit Frame(const Point2& dir) {
    const double len = norm(dir);
    if (!(len > 0)) throw std::invalid_argument("Frame: zero direction");
    c = dir.x / len;
    s = dir.y / len;
  }
  Point2 to_frame(const Point2& p) const { return {c * p.x + s * p.y, -s * p.x + c * p.y}; }
  Point2 to_ambient(const Point2& q) const { return {c * q.x - s * q.y, s * q.x + c * q.y}; }
};

using Polygon = std::vector<Point2>;

inline double polygon_area(const Polygon& p) {
  double a = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    const Point2& u = p[i];
    const Point2& w = p[(i + 1) % p.size()];
    a += cross(u, w);
  }
  return a / 2;
}

/// Sutherland-Hodgman clip of a convex polygon against the half-plane
/// n.x >= offset. Degenerate output (fewer than 3 vertices) returns empty.
Polygon clip_halfplane(const Polygon& poly, const Point2& n, double offset);

/// Fan triangulation of a convex polygon.
std::vector<Tri> fan_triangulate(const Polygon& poly);

}  // namespace dpg
