#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpg/mesh.hpp"
#include "dpg/quadrature.hpp"

namespace dpg {

/// Scalar field that may be discontinuous across the listed interfaces; the
/// evaluator itself is defined everywhere (both branches evaluable).
struct PiecewiseScalar {
  std::function<double(const Point2&)> eval;
  std::vector<Interface> interfaces;
};

/// b . grad u + c u = f on (0,1)^2, u = g on the inflow boundary.
struct TransportProblem {
  std::string name;
  std::function<Point2(const Point2&)> b;
  std::function<double(const Point2&)> div_b;
  std::function<double(const Point2&)> c;
  PiecewiseScalar f;
  std::function<double(const Point2&)> g;
  std::optional<PiecewiseScalar> g_bar;    // extension of g for inhomogeneous data
  std::optional<PiecewiseScalar> exact_u;
};

/// Element means of b, c - div b, and div b (paper notation b_K, c_K, d_K).
struct CellData {
  std::vector<Point2> bbar;
  std::vector<double> cbar;
  std::vector<double> dbar;
};

CellData cell_averages(const TransportProblem& problem, const TriMesh& mesh, int quad_degree);

/// f = 1 - x1, g = 0, constant b with b1 > 0, b2 >= 0; continuous piecewise
/// quadratic solution with a kink over the line b . x_perp = 0.
TransportProblem benchmark_exp1(const Point2& b);

/// Same field, discontinuous source switching off below b . x_perp = 1/4;
/// the solution is discontinuous across that line.
TransportProblem benchmark_exp2(const Point2& b);

/// Rotation field b = (x2, -x1), f = 0, inhomogeneous inflow data; the
/// solution is the indicator of the annulus 1/4 <= |x| <= 1.
TransportProblem benchmark_exp3();

}  // namespace dpg
