#pragma once

#include <array>
#include <vector>

namespace dbc {

/// Rule on the reference triangle, points in barycentric coordinates.
/// Weights sum to 1, so integrals are area * sum(w_i f(x_i)).
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Rule on [0, 1]; weights sum to 1.
struct IntervalRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Six-point rule exact for polynomials of degree 4.
const TriangleRule& triangle_degree4();

/// Collapsed (Duffy) Gauss product rule with n points per direction;
/// exact for polynomials of degree 2n - 1.
TriangleRule triangle_collapsed(int n);

/// n-point Gauss-Legendre rule mapped to [0, 1]; exact for degree 2n - 1.
IntervalRule gauss_legendre(int n);

/// Triangle and time rule used together for integrals over prisms.
struct PrismRule {
  TriangleRule space;
  IntervalRule time;
};

/// 6-point degree-4 triangle rule times 2-point Gauss in time.
PrismRule default_prism_rule();

/// Rule exact to at least the given degree in both space and time.
PrismRule prism_rule_of_degree(int degree);

}  // namespace dbc
