#include "stbiot/basis.hpp"

#include <cmath>

namespace stbiot {

Lagrange1D::Lagrange1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  const int n = size();
  denom_.assign(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) denom_[i] *= nodes_[i] - nodes_[j];
}

double Lagrange1D::value(int i, double x) const {
  double v = 1.0;
  const int n = size();
  for (int j = 0; j < n; ++j)
    if (j != i) v *= x - nodes_[j];
  return v / denom_[i];
}

double Lagrange1D::derivative(int i, double x) const {
  const int n = size();
  double sum = 0.0;
  for (int l = 0; l < n; ++l) {
    if (l == i) continue;
    double prod = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i && j != l) prod *= x - nodes_[j];
    sum += prod;
  }
  return sum / denom_[i];
}

void Lagrange1D::values(double x, double* out) const {
  for (int i = 0; i < size(); ++i) out[i] = value(i, x);
}

void Lagrange1D::derivatives(double x, double* out) const {
  for (int i = 0; i < size(); ++i) out[i] = derivative(i, x);
}

ScalarElement::ScalarElement(ElementFamily family, int degree, int dim) : family_(family), degree_(degree), dim_(dim) {
  if (dim < 1 || dim > 3) throw Error("ScalarElement: dim must be 1, 2 or 3");
  if (degree < 0 || degree > 15) throw Error("ScalarElement: degree must be in 0..15");
  if (family == ElementFamily::q_continuous) {
    if (degree < 1) throw Error("ScalarElement: continuous Q element needs degree >= 1");
    lagrange_ = Lagrange1D(gauss_lobatto(degree + 1).points);
    const int p = degree + 1;
    int total = 1;
    for (int d = 0; d < dim; ++d) total *= p;
    for (int idx = 0; idx < total; ++idx) {
      std::array<int, 3> m{0, 0, 0};
      int rem = idx;
      for (int d = 0; d < dim; ++d) {
        m[d] = rem % p;
        rem /= p;
      }
      multi_.push_back(m);
    }
  } else {
    // Ordered by total degree, then lexicographically with x fastest.
    for (int total = 0; total <= degree; ++total) {
      for (int c = 0; c <= (dim > 2 ? total : 0); ++c)
        for (int b = 0; b <= (dim > 1 ? total - c : 0); ++b) {
          const int a = total - b - c;
          if (a < 0) continue;
          multi_.push_back({a, b, c});
        }
    }
  }
  n_ = static_cast<int>(multi_.size());
}

Point ScalarElement::node(int i) const {
  if (family_ != ElementFamily::q_continuous) throw Error("ScalarElement::node: discontinuous element has no nodes");
  Point p{0.0, 0.0, 0.0};
  for (int d = 0; d < dim_; ++d) p[d] = lagrange_.nodes()[multi_[i][d]];
  return p;
}

double ScalarElement::axis_value(int j, double x) const {
  return family_ == ElementFamily::q_continuous ? lagrange_.value(j, x) : legendre(j, x);
}

double ScalarElement::axis_derivative(int j, double x) const {
  return family_ == ElementFamily::q_continuous ? lagrange_.derivative(j, x) : legendre_derivative(j, x);
}

void ScalarElement::values(const Point& xi, double* out) const {
  const int m = degree_ + 1;
  double tab[3][16];
  for (int d = 0; d < dim_; ++d)
    for (int j = 0; j < m; ++j) tab[d][j] = axis_value(j, xi[d]);
  for (int i = 0; i < n_; ++i) {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= tab[d][multi_[i][d]];
    out[i] = v;
  }
}

void ScalarElement::gradients(const Point& xi, double* out) const {
  const int m = degree_ + 1;
  double tab[3][16], dtab[3][16];
  for (int d = 0; d < dim_; ++d)
    for (int j = 0; j < m; ++j) {
      tab[d][j] = axis_value(j, xi[d]);
      dtab[d][j] = axis_derivative(j, xi[d]);
    }
  for (int i = 0; i < n_; ++i) {
    for (int g = 0; g < 3; ++g) {
      if (g >= dim_) {
        out[i * 3 + g] = 0.0;
        continue;
      }
      double v = 1.0;
      for (int d = 0; d < dim_; ++d) v *= (d == g) ? dtab[d][multi_[i][d]] : tab[d][multi_[i][d]];
      out[i * 3 + g] = v;
    }
  }
}

ElementTable tabulate(const ScalarElement& element, const std::vector<Point>& points) {
  ElementTable t;
  t.nq = static_cast<int>(points.size());
  t.nb = element.size();
  t.values.resize(static_cast<std::size_t>(t.nq) * t.nb);
  t.gradients.resize(static_cast<std::size_t>(t.nq) * t.nb * 3);
  for (int q = 0; q < t.nq; ++q) {
    element.values(points[q], &t.values[static_cast<std::size_t>(q) * t.nb]);
    element.gradients(points[q], &t.gradients[static_cast<std::size_t>(q) * t.nb * 3]);
  }
  return t;
}

TimeBasis::TimeBasis(int k, double t_start, double t_end) : k_(k), t0_(t_start), t1_(t_end) {
  if (k < 0) throw Error("TimeBasis: k must be >= 0");
  if (!(t_end > t_start)) throw Error("TimeBasis: empty time interval");
  radau_ = gauss_radau_right(k);
  lag_ = Lagrange1D(radau_.points);
}

TimeBasis time_basis(int k, double t_start, double t_end) { return TimeBasis(k, t_start, t_end); }

}  // namespace stbiot
