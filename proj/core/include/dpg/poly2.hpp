#pragma once

#include <vector>

#include "dpg/geometry.hpp"

namespace dpg {

/// Dense bivariate polynomial in graded-lexicographic monomial order:
/// for total degree t the block starts at t(t+1)/2 and entry j within the
/// block is the coefficient of x^(t-j) y^j.
class Poly2 {
 public:
  Poly2() : deg_(0), c_(1, 0.0) {}
  explicit Poly2(int degree) : deg_(degree), c_(dim(degree), 0.0) {}

  static size_t dim(int degree) { return static_cast<size_t>((degree + 1) * (degree + 2) / 2); }
  static Poly2 constant(double v) {
    Poly2 p(0);
    p.c_[0] = v;
    return p;
  }
  /// a + bx*x + by*y
  static Poly2 affine(double a, double bx, double by);

  int degree() const { return deg_; }
  double coeff(int px, int py) const;
  double& at(int px, int py);
  const std::vector<double>& coeffs() const { return c_; }

  double eval(double x, double y) const;
  double eval(const Point2& p) const { return eval(p.x, p.y); }

  Poly2 operator+(const Poly2& o) const;
  Poly2 operator-(const Poly2& o) const;
  Poly2 operator*(const Poly2& o) const;
  Poly2 operator*(double s) const;
  Poly2& operator+=(const Poly2& o) { return *this = *this + o; }

  Poly2 dx() const;
  Poly2 dy() const;
  /// Directional derivative b.grad
  Poly2 ddir(const Point2& b) const { return dx() * b.x + dy() * b.y; }

  /// Antiderivative in x (constant of integration 0).
  Poly2 antider_x() const;

  /// Composition p(ax + bx*X + cx*Y, ay + by*X + cy*Y).
  Poly2 compose_affine(double ax, double bx, double cx, double ay, double by, double cy) const;

  /// p(alpha0 + alpha1*y, y): substitute the x-variable by an affine function
  /// of y; the result depends on y only.
  Poly2 substitute_x(double alpha0, double alpha1) const;

  /// (p(beta(y),y) - p(alpha(y),y)) / (beta(y) - alpha(y)) for affine
  /// alpha, beta; a polynomial identity, valid also where alpha == beta.
  Poly2 difference_quotient(double alpha0, double alpha1, double beta0, double beta1) const;

  /// Exact integral over the reference triangle.
  double integral_ref() const;

  /// Drops trailing zero coefficient blocks (for tidy degree bookkeeping).
  Poly2 trimmed() const;

 private:
  int deg_;
  std::vector<double> c_;
};

inline Poly2 operator*(double s, const Poly2& p) { return p * s; }

/// Rotates a polynomial into a frame: returns q with q(X) = p(to_ambient(X)).
Poly2 to_frame_poly(const Poly2& p, const Frame& f);

}  // namespace dpg
