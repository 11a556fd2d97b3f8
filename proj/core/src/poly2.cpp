#include "dpg/poly2.hpp"

#include <cmath>
#include <stdexcept>

#include "dpg/quadrature.hpp"

namespace dpg {

namespace {
inline size_t idx(int px, int py) {
  const int t = px + py;
  return static_cast<size_t>(t * (t + 1) / 2 + py);
}
}  // namespace

Poly2 Poly2::affine(double a, double bx, double by) {
  Poly2 p(1);
  p.c_[0] = a;
  p.c_[1] = bx;
  p.c_[2] = by;
  return p;
}

double Poly2::coeff(int px, int py) const {
  if (px < 0 || py < 0 || px + py > deg_) return 0.0;
  return c_[idx(px, py)];
}

double& Poly2::at(int px, int py) {
  if (px < 0 || py < 0 || px + py > deg_) throw std::out_of_range("Poly2::at");
  return c_[idx(px, py)];
}

double Poly2::eval(double x, double y) const {
  // Horner in x per y-power would need reshuffling; powers are fine here
  // (degrees stay small).
  double xp[32], yp[32];
  xp[0] = yp[0] = 1.0;
  for (int k = 1; k <= deg_; ++k) {
    xp[k] = xp[k - 1] * x;
    yp[k] = yp[k - 1] * y;
  }
  double s = 0;
  for (int t = 0; t <= deg_; ++t)
    for (int j = 0; j <= t; ++j) s += c_[idx(t - j, j)] * xp[t - j] * yp[j];
  return s;
}

Poly2 Poly2::operator+(const Poly2& o) const {
  Poly2 r(std::max(deg_, o.deg_));
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o * (-1.0); }

Poly2 Poly2::operator*(const Poly2& o) const {
  Poly2 r(deg_ + o.deg_);
  for (int t1 = 0; t1 <= deg_; ++t1)
    for (int j1 = 0; j1 <= t1; ++j1) {
      const double a = c_[idx(t1 - j1, j1)];
      if (a == 0) continue;
      for (int t2 = 0; t2 <= o.deg_; ++t2)
        for (int j2 = 0; j2 <= t2; ++j2)
          r.c_[idx(t1 - j1 + t2 - j2, j1 + j2)] += a * o.c_[idx(t2 - j2, j2)];
    }
  return r;
}

Poly2 Poly2::operator*(double s) const {
  Poly2 r = *this;
  for (double& v : r.c_) v *= s;
  return r;
}

Poly2 Poly2::dx() const {
  Poly2 r(std::max(0, deg_ - 1));
  for (int t = 1; t <= deg_; ++t)
    for (int j = 0; j < t; ++j) r.c_[idx(t - j - 1, j)] += (t - j) * c_[idx(t - j, j)];
  return r;
}

Poly2 Poly2::dy() const {
  Poly2 r(std::max(0, deg_ - 1));
  for (int t = 1; t <= deg_; ++t)
    for (int j = 1; j <= t; ++j) r.c_[idx(t - j, j - 1)] += j * c_[idx(t - j, j)];
  return r;
}

Poly2 Poly2::antider_x() const {
  Poly2 r(deg_ + 1);
  for (int t = 0; t <= deg_; ++t)
    for (int j = 0; j <= t; ++j) r.c_[idx(t - j + 1, j)] = c_[idx(t - j, j)] / (t - j + 1);
  return r;
}

Poly2 Poly2::compose_affine(double ax, double bx, double cx, double ay, double by,
                            double cy) const {
  const Poly2 X = Poly2::affine(ax, bx, cx);
  const Poly2 Y = Poly2::affine(ay, by, cy);
  // Powers of the two affine images, then accumulate.
  std::vector<Poly2> Xp(static_cast<size_t>(deg_) + 1), Yp(static_cast<size_t>(deg_) + 1);
  Xp[0] = Poly2::constant(1.0);
  Yp[0] = Poly2::constant(1.0);
  for (int k = 1; k <= deg_; ++k) {
    Xp[static_cast<size_t>(k)] = Xp[static_cast<size_t>(k - 1)] * X;
    Yp[static_cast<size_t>(k)] = Yp[static_cast<size_t>(k - 1)] * Y;
  }
  Poly2 r(deg_);
  for (int t = 0; t <= deg_; ++t)
    for (int j = 0; j <= t; ++j) {
      const double a = c_[idx(t - j, j)];
      if (a == 0) continue;
      r += a * (Xp[static_cast<size_t>(t - j)] * Yp[static_cast<size_t>(j)]);
    }
  return r;
}

Poly2 Poly2::substitute_x(double alpha0, double alpha1) const {
  return compose_affine(alpha0, 0.0, alpha1, 0.0, 0.0, 1.0);
}

Poly2 Poly2::difference_quotient(double alpha0, double alpha1, double beta0, double beta1) const {
  // p = sum_k x^k r_k(y); (p(b)-p(a))/(b-a) = sum_k r_k(y) sum_{i+j=k-1} b^i a^j.
  const Poly2 A = Poly2::affine(alpha0, 0.0, alpha1);
  const Poly2 B = Poly2::affine(beta0, 0.0, beta1);
  std::vector<Poly2> Ap(static_cast<size_t>(deg_) + 1), Bp(static_cast<size_t>(deg_) + 1);
  Ap[0] = Poly2::constant(1.0);
  Bp[0] = Poly2::constant(1.0);
  for (int k = 1; k <= deg_; ++k) {
    Ap[static_cast<size_t>(k)] = Ap[static_cast<size_t>(k - 1)] * A;
    Bp[static_cast<size_t>(k)] = Bp[static_cast<size_t>(k - 1)] * B;
  }
  Poly2 r(std::max(0, deg_ - 1));
  for (int k = 1; k <= deg_; ++k) {
    // r_k(y) = sum over monomials with x-power k
    Poly2 rk(std::max(0, deg_ - k));
    for (int j = 0; k + j <= deg_; ++j) rk.at(0, j) = c_[idx(k, j)];
    Poly2 h(0);
    for (int i = 0; i < k; ++i)
      h += Bp[static_cast<size_t>(i)] * Ap[static_cast<size_t>(k - 1 - i)];
    r += rk * h;
  }
  return r;
}

double Poly2::integral_ref() const {
  double s = 0;
  for (int t = 0; t <= deg_; ++t)
    for (int j = 0; j <= t; ++j) {
      const double a = c_[idx(t - j, j)];
      if (a != 0) s += a * monomial_integral_tri(t - j, j);
    }
  return s;
}

Poly2 Poly2::trimmed() const {
  int d = deg_;
  while (d > 0) {
    bool zero = true;
    for (int j = 0; j <= d; ++j)
      if (c_[idx(d - j, j)] != 0.0) {
        zero = false;
        break;
      }
    if (!zero) break;
    --d;
  }
  Poly2 r(d);
  for (int t = 0; t <= d; ++t)
    for (int j = 0; j <= t; ++j) r.c_[idx(t - j, j)] = c_[idx(t - j, j)];
  return r;
}

Poly2 to_frame_poly(const Poly2& p, const Frame& f) {
  // q(X,Y) = p(c X - s Y, s X + c Y)
  return p.compose_affine(0.0, f.c, -f.s, 0.0, f.s, f.c);
}

}  // namespace dpg
