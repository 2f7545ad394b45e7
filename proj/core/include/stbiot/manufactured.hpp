#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stbiot/problem.hpp"

namespace stbiot {

// f, f', f'' of a univariate factor.
using Jet = std::function<std::array<double, 3>(double)>;

Jet jet_one();
Jet jet_sin(double a, double b = 0.0);  // sin(a s + b)
Jet jet_sin_square_arg(double a);       // sin(a s^2)
Jet jet_poly(std::vector<double> coeffs);  // sum c_i s^i

// c * T(t) * X(x) * Y(y) * Z(z).
struct SeparableTerm {
  double coeff = 1.0;
  Jet time;
  std::array<Jet, 3> space;
};

// Scalar field as a sum of separable terms with derivatives up to order two.
class SeparableField {
 public:
  SeparableField() = default;
  explicit SeparableField(std::vector<SeparableTerm> terms) : terms_(std::move(terms)) {}
  // d^it/dt^it of the mixed spatial derivative with multi-index beta (entries <= 2).
  double derivative(const Point& x, double t, int it, const std::array<int, 3>& beta) const;
  double value(const Point& x, double t) const { return derivative(x, t, 0, {0, 0, 0}); }

 private:
  std::vector<SeparableTerm> terms_;
};

// Exact (u, p) with everything derived from them.
class ManufacturedSolution {
 public:
  ManufacturedSolution(int dim, std::array<SeparableField, 3> u, SeparableField p, MaterialParams material);

  int dim() const { return dim_; }
  Vec3 u(const Point& x, double t) const;
  Vec3 v(const Point& x, double t) const;
  Mat3 grad_u(const Point& x, double t) const;  // [a][b] = d u_a / d x_b
  double p(const Point& x, double t) const;
  Vec3 grad_p(const Point& x, double t) const;

  // rho u_tt - div C eps(u) + alpha grad p.
  Vec3 body_force(const Point& x, double t) const;
  // c0 p_t + alpha div u_t - div K grad p.
  double source(const Point& x, double t) const;

  // Data for an all-Dirichlet problem.
  ProblemData dirichlet_data() const;

  // Largest mismatch (relative to max(1, |exact|)) between analytic derivatives and
  // central differences of lower-order derivatives at the sample points.
  double finite_difference_check(const std::vector<std::pair<Point, double>>& samples, double h = 1e-5) const;

 private:
  double du(int a, const Point& x, double t, int it, std::array<int, 3> beta) const {
    return u_[a].derivative(x, t, it, beta);
  }
  int dim_;
  std::array<SeparableField, 3> u_;
  SeparableField p_;
  MaterialParams mat_;
};

enum class CaseKind { conv1, conv2 };

struct ManufacturedCase {
  CaseKind kind = CaseKind::conv1;
  std::string name;
  double t_start = 0.0;
  ManufacturedSolution solution;
};

// conv1: u = (phi, phi), p = phi with phi = sin(w1 t^2) sin(w2 x) sin(w2 y), I = (1, 2].
ManufacturedCase make_conv1(const MaterialParams& m, double w1 = 3.14159265358979323846,
                            double w2 = 3.14159265358979323846);
// conv2: divergence-free polynomial-in-space u with sin(w1 t), p with sin(w2 t), start 0.
ManufacturedCase make_conv2(const MaterialParams& m, double w1 = 40.0 * 3.14159265358979323846,
                            double w2 = 10.0 * 3.14159265358979323846);

}  // namespace stbiot
