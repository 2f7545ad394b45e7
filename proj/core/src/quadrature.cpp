#include "stbiot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stbiot {

double legendre(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_derivative(int n, double x) {
  // Recurrence P'_n = n P_{n-1} + x P'_{n-1} avoids the 1-x^2 singularity.
  double p = 1.0, dp = 0.0;
  double pm = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double pj = (j == 1) ? x : ((2.0 * j - 1.0) * x * p - (j - 1.0) * pm) / j;
    const double dpj = j * p + x * dp;
    pm = p;
    p = pj;
    dp = dpj;
  }
  return dp;
}

namespace {

// Newton on f with derivative df from each starting guess.
template <class F, class DF>
double newton(F f, DF df, double x) {
  for (int it = 0; it < 100; ++it) {
    const double dx = f(x) / df(x);
    x -= dx;
    if (std::abs(dx) < 1e-16) break;
  }
  return x;
}

}  // namespace

Rule1D gauss_legendre(int n) {
  if (n < 1) throw Error("gauss_legendre: n must be >= 1");
  Rule1D r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    x = newton([n](double t) { return legendre(n, t); }, [n](double t) { return legendre_derivative(n, t); }, x);
    const double dp = legendre_derivative(n, x);
    r.points[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

Rule1D gauss_lobatto(int n) {
  if (n < 2) throw Error("gauss_lobatto: n must be >= 2");
  const int m = n - 1;
  Rule1D r;
  r.points.resize(n);
  r.weights.resize(n);
  r.points[0] = -1.0;
  r.points[m] = 1.0;
  // Interior nodes are the roots of P'_m; Newton via the Legendre ODE for P''_m.
  for (int i = 1; i < m; ++i) {
    double x = -std::cos(std::numbers::pi * i / m);
    auto f = [m](double t) { return legendre_derivative(m, t); };
    auto df = [m](double t) {
      return (2.0 * t * legendre_derivative(m, t) - m * (m + 1.0) * legendre(m, t)) / (1.0 - t * t);
    };
    r.points[i] = newton(f, df, x);
  }
  for (int i = 0; i < n; ++i) {
    const double p = legendre(m, r.points[i]);
    r.weights[i] = 2.0 / (m * (m + 1.0) * p * p);
  }
  return r;
}

Rule1D gauss_radau_right(int k) {
  if (k < 0) throw Error("gauss_radau_right: k must be >= 0");
  const int n = k + 1;
  Rule1D r;
  r.points.resize(n);
  r.weights.resize(n);
  r.points[k] = 1.0;
  // Interior nodes: roots of P_k - P_{k+1}, which are the reflected left-Radau nodes.
  auto f = [k](double t) { return legendre(k, t) - legendre(k + 1, t); };
  auto df = [k](double t) { return legendre_derivative(k, t) - legendre_derivative(k + 1, t); };
  for (int i = 0; i < k; ++i) {
    double x = -std::cos(2.0 * std::numbers::pi * (i + 0.5) / (2.0 * k + 1.0));
    r.points[i] = newton(f, df, x);
  }
  std::sort(r.points.begin(), r.points.end());
  const double n2 = static_cast<double>(n) * n;
  for (int i = 0; i < n; ++i) {
    const double t = r.points[i];
    if (i == k) {
      r.weights[i] = 2.0 / n2;
    } else {
      const double p = legendre(k, t);
      r.weights[i] = (1.0 + t) / (n2 * p * p);
    }
  }
  return r;
}

Rule1D gauss_radau_rule(int k) { return gauss_radau_right(k); }

QuadratureRule tensor_rule(const Rule1D& rule, int dim) {
  if (dim < 0 || dim > 3) throw Error("tensor_rule: dim must be in 0..3");
  QuadratureRule q;
  q.dim = dim;
  const int n = static_cast<int>(rule.size());
  int total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  q.points.resize(total, Point{0.0, 0.0, 0.0});
  q.weights.resize(total, 1.0);
  // x fastest.
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx;
    for (int d = 0; d < dim; ++d) {
      const int i = rem % n;
      rem /= n;
      q.points[idx][d] = rule.points[i];
      q.weights[idx] *= rule.weights[i];
    }
  }
  return q;
}

QuadratureRule gauss_rule(int n, int dim) { return tensor_rule(gauss_legendre(n), dim); }

}  // namespace stbiot
