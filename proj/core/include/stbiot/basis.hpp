#pragma once

#include <vector>

#include "stbiot/common.hpp"
#include "stbiot/quadrature.hpp"

namespace stbiot {

// Lagrange interpolation basis on given 1D nodes.
class Lagrange1D {
 public:
  Lagrange1D() = default;
  explicit Lagrange1D(std::vector<double> nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  double value(int i, double x) const;
  double derivative(int i, double x) const;
  void values(double x, double* out) const;
  void derivatives(double x, double* out) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> denom_;
};

enum class ElementFamily { q_continuous, p_discontinuous };

// Scalar shape functions on the reference cell [-1, 1]^dim.
// q_continuous: tensor Lagrange on Gauss-Lobatto nodes of degree `degree`.
// p_discontinuous: tensor Legendre products of total degree <= `degree`.
class ScalarElement {
 public:
  ScalarElement() = default;
  ScalarElement(ElementFamily family, int degree, int dim);

  ElementFamily family() const { return family_; }
  int degree() const { return degree_; }
  int dim() const { return dim_; }
  int size() const { return n_; }
  bool continuous() const { return family_ == ElementFamily::q_continuous; }

  // Per-axis index of local function i (node index for Q, Legendre degree for P).
  const std::array<int, 3>& multi_index(int i) const { return multi_[i]; }
  // Reference coordinates of node i (Q only).
  Point node(int i) const;

  void values(const Point& xi, double* out) const;
  // Gradient w.r.t. reference coordinates, out[i * 3 + d].
  void gradients(const Point& xi, double* out) const;

 private:
  double axis_value(int d_index, double x) const;
  double axis_derivative(int d_index, double x) const;

  ElementFamily family_ = ElementFamily::q_continuous;
  int degree_ = 0;
  int dim_ = 0;
  int n_ = 0;
  Lagrange1D lagrange_;
  std::vector<std::array<int, 3>> multi_;
};

// Reference tables of values and gradients at quadrature points.
struct ElementTable {
  int nq = 0;
  int nb = 0;
  std::vector<double> values;     // [q * nb + i]
  std::vector<double> gradients;  // [(q * nb + i) * 3 + d], reference gradients
  double value(int q, int i) const { return values[q * nb + i]; }
  double grad(int q, int i, int d) const { return gradients[(q * nb + i) * 3 + d]; }
};

ElementTable tabulate(const ScalarElement& element, const std::vector<Point>& points);

// Lagrange basis in time on the right Radau nodes of one slab.
class TimeBasis {
 public:
  TimeBasis() = default;
  TimeBasis(int k, double t_start, double t_end);

  int degree() const { return k_; }
  int size() const { return k_ + 1; }
  double t_start() const { return t0_; }
  double t_end() const { return t1_; }
  double tau() const { return t1_ - t0_; }
  const Rule1D& radau() const { return radau_; }
  // Physical Radau node t_{n,m}.
  double node(int m) const { return map_to_interval(radau_.points[m], t0_, t1_); }
  double to_reference(double t) const { return (2.0 * t - t0_ - t1_) / (t1_ - t0_); }

  double value(int m, double t) const { return lag_.value(m, to_reference(t)); }
  double derivative(int m, double t) const { return lag_.derivative(m, to_reference(t)) * 2.0 / tau(); }
  double reference_value(int m, double xi) const { return lag_.value(m, xi); }
  double reference_derivative(int m, double xi) const { return lag_.derivative(m, xi); }
  // chi_m(t_{n-1}^+), the value at the left end of the slab.
  double left_value(int m) const { return lag_.value(m, -1.0); }

 private:
  int k_ = 0;
  double t0_ = 0.0;
  double t1_ = 1.0;
  Rule1D radau_;
  Lagrange1D lag_;
};

TimeBasis time_basis(int k, double t_start, double t_end);

}  // namespace stbiot
