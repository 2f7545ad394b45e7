#pragma once

#include <vector>

#include "stbiot/common.hpp"

namespace stbiot {

// One-dimensional rule on [-1, 1].
struct Rule1D {
  std::vector<double> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

// Tensor rule on [-1, 1]^dim.
struct QuadratureRule {
  int dim = 0;
  std::vector<Point> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

// Legendre polynomial P_n(x) and its derivative.
double legendre(int n, double x);
double legendre_derivative(int n, double x);

Rule1D gauss_legendre(int n);
// n >= 2 points including both endpoints.
Rule1D gauss_lobatto(int n);
// k+1 points, right endpoint included; exact for degree 2k.
Rule1D gauss_radau_right(int k);
Rule1D gauss_radau_rule(int k);

QuadratureRule tensor_rule(const Rule1D& rule, int dim);
QuadratureRule gauss_rule(int n, int dim);

// Affine map of a reference point on [-1, 1] to [a, b].
inline double map_to_interval(double xi, double a, double b) { return 0.5 * (a + b) + 0.5 * (b - a) * xi; }

}  // namespace stbiot
