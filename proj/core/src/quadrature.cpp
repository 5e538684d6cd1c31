#include "dbc/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dbc {

const TriangleRule& triangle_degree4() {
  static const TriangleRule rule = [] {
    constexpr double a1 = 0.445948490915965, b1 = 1.0 - 2.0 * a1;
    constexpr double a2 = 0.091576213509771, b2 = 1.0 - 2.0 * a2;
    constexpr double w1 = 0.223381589678011;
    constexpr double w2 = 0.109951743655322;
    TriangleRule r;
    r.points = {{b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1},
                {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}};
    r.weights = {w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

IntervalRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  IntervalRule r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence: p1 = P_n(x), p0 = P_{n-1}(x)
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.points[i] = 0.5 * (1.0 - x);
    r.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

TriangleRule triangle_collapsed(int n) {
  // (u, v) in [0,1]^2 -> (x, y) = (u, v (1 - u)), Jacobian (1 - u).
  // Gauss in both directions; one extra point in u covers the Jacobian.
  const IntervalRule gu = gauss_legendre(n + 1);
  const IntervalRule gv = gauss_legendre(n);
  TriangleRule r;
  for (std::size_t i = 0; i < gu.points.size(); ++i) {
    for (std::size_t j = 0; j < gv.points.size(); ++j) {
      const double u = gu.points[i];
      const double x = u;
      const double y = gv.points[j] * (1.0 - u);
      r.points.push_back({1.0 - x - y, x, y});
      // reference area is 1/2, so normalized weight = 2 * w_u w_v (1 - u)
      r.weights.push_back(2.0 * gu.weights[i] * gv.weights[j] * (1.0 - u));
    }
  }
  return r;
}

PrismRule default_prism_rule() { return {triangle_degree4(), gauss_legendre(2)}; }

PrismRule prism_rule_of_degree(int degree) {
  if (degree <= 4) return {triangle_degree4(), gauss_legendre(std::max(1, (degree + 2) / 2))};
  const int n = (degree + 3) / 2;
  return {triangle_collapsed(n), gauss_legendre((degree + 2) / 2)};
}

}  // namespace dbc
