#include "stbiot/manufactured.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <numbers>

namespace stbiot {

Jet jet_one() {
  return [](double) { return std::array<double, 3>{1.0, 0.0, 0.0}; };
}

Jet jet_sin(double a, double b) {
  return [a, b](double s) {
    const double sv = std::sin(a * s + b), cv = std::cos(a * s + b);
    return std::array<double, 3>{sv, a * cv, -a * a * sv};
  };
}

Jet jet_sin_square_arg(double a) {
  return [a](double s) {
    const double sv = std::sin(a * s * s), cv = std::cos(a * s * s);
    return std::array<double, 3>{sv, 2.0 * a * s * cv, 2.0 * a * cv - 4.0 * a * a * s * s * sv};
  };
}

Jet jet_poly(std::vector<double> c) {
  return [c](double s) {
    std::array<double, 3> r{0.0, 0.0, 0.0};
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
      r[2] = r[2] * s + 2.0 * r[1];
      r[1] = r[1] * s + r[0];
      r[0] = r[0] * s + c[i];
    }
    return r;
  };
}

double SeparableField::derivative(const Point& x, double t, int it, const std::array<int, 3>& beta) const {
  double sum = 0.0;
  for (const auto& term : terms_) {
    double v = term.coeff * term.time(t)[it];
    for (int d = 0; d < 3 && v != 0.0; ++d)
      if (term.space[d]) v *= term.space[d](x[d])[beta[d]];
    sum += v;
  }
  return sum;
}

ManufacturedSolution::ManufacturedSolution(int dim, std::array<SeparableField, 3> u, SeparableField p,
                                           MaterialParams material)
    : dim_(dim), u_(std::move(u)), p_(std::move(p)), mat_(material) {}

namespace {
std::array<int, 3> unit(int d, int order = 1) {
  std::array<int, 3> b{0, 0, 0};
  b[d] = order;
  return b;
}
std::array<int, 3> mixed(int a, int b) {
  std::array<int, 3> m{0, 0, 0};
  m[a] += 1;
  m[b] += 1;
  return m;
}
}  // namespace

Vec3 ManufacturedSolution::u(const Point& x, double t) const {
  Vec3 r{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) r[a] = du(a, x, t, 0, {0, 0, 0});
  return r;
}

Vec3 ManufacturedSolution::v(const Point& x, double t) const {
  Vec3 r{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) r[a] = du(a, x, t, 1, {0, 0, 0});
  return r;
}

Mat3 ManufacturedSolution::grad_u(const Point& x, double t) const {
  Mat3 g{};
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) g[a][b] = du(a, x, t, 0, unit(b));
  return g;
}

double ManufacturedSolution::p(const Point& x, double t) const { return p_.value(x, t); }

Vec3 ManufacturedSolution::grad_p(const Point& x, double t) const {
  Vec3 g{0.0, 0.0, 0.0};
  for (int b = 0; b < dim_; ++b) g[b] = p_.derivative(x, t, 0, unit(b));
  return g;
}

Vec3 ManufacturedSolution::body_force(const Point& x, double t) const {
  // div C eps(u) = mu lap u + (lambda + mu) grad div u for constant Lame parameters.
  Vec3 f{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) {
    double lap = 0.0, grad_div = 0.0;
    for (int b = 0; b < dim_; ++b) {
      lap += du(a, x, t, 0, unit(b, 2));
      grad_div += du(b, x, t, 0, mixed(a, b));
    }
    f[a] = mat_.rho * du(a, x, t, 2, {0, 0, 0}) - mat_.mu * lap - (mat_.lambda + mat_.mu) * grad_div +
           mat_.alpha * p_.derivative(x, t, 0, unit(a));
  }
  return f;
}

double ManufacturedSolution::source(const Point& x, double t) const {
  double div_ut = 0.0, kdiv = 0.0;
  for (int a = 0; a < dim_; ++a) {
    div_ut += du(a, x, t, 1, unit(a));
    for (int b = 0; b < dim_; ++b) kdiv += mat_.K[a][b] * p_.derivative(x, t, 0, mixed(a, b));
  }
  return mat_.c0 * p_.derivative(x, t, 1, {0, 0, 0}) + mat_.alpha * div_ut - kdiv;
}

ProblemData ManufacturedSolution::dirichlet_data() const {
  // The handles own a copy so they stay valid independently of this object.
  auto self = std::make_shared<const ManufacturedSolution>(*this);
  ProblemData d;
  d.body_force = [self](const Point& x, double t) { return self->body_force(x, t); };
  d.source = [self](const Point& x, double t) { return self->source(x, t); };
  d.u_dirichlet = [self](const Point& x, double t) { return self->u(x, t); };
  d.v_dirichlet = [self](const Point& x, double t) { return self->v(x, t); };
  d.p_dirichlet = [self](const Point& x, double t) { return self->p(x, t); };
  d.u0 = d.u_dirichlet;
  d.u1 = d.v_dirichlet;
  d.p0 = d.p_dirichlet;
  return d;
}

double ManufacturedSolution::finite_difference_check(const std::vector<std::pair<Point, double>>& samples,
                                                     double h) const {
  double worst = 0.0;
  auto rel = [](double exact, double approx, double scale) { return std::abs(exact - approx) / std::max(1.0, scale); };
  for (const auto& [x, t] : samples) {
    for (int a = 0; a < dim_; ++a) {
      const double fd1 = (du(a, x, t + h, 0, {0, 0, 0}) - du(a, x, t - h, 0, {0, 0, 0})) / (2.0 * h);
      const double fd2 = (du(a, x, t + h, 1, {0, 0, 0}) - du(a, x, t - h, 1, {0, 0, 0})) / (2.0 * h);
      const double d1 = du(a, x, t, 1, {0, 0, 0}), d2 = du(a, x, t, 2, {0, 0, 0});
      worst = std::max(worst, rel(d1, fd1, std::abs(d1)));
      worst = std::max(worst, rel(d2, fd2, std::abs(d2)));
      for (int b = 0; b < dim_; ++b) {
        Point xp = x, xm = x;
        xp[b] += h;
        xm[b] -= h;
        const double g = du(a, x, t, 0, unit(b));
        worst = std::max(worst, rel(g, (du(a, xp, t, 0, {0, 0, 0}) - du(a, xm, t, 0, {0, 0, 0})) / (2.0 * h), std::abs(g)));
        const double gt = du(a, x, t, 1, unit(b));
        worst = std::max(worst, rel(gt, (du(a, x, t + h, 0, unit(b)) - du(a, x, t - h, 0, unit(b))) / (2.0 * h), std::abs(gt)));
        const double g2 = du(a, x, t, 0, unit(b, 2));
        worst = std::max(worst, rel(g2, (du(a, xp, t, 0, unit(b)) - du(a, xm, t, 0, unit(b))) / (2.0 * h), std::abs(g2)));
        for (int c = 0; c < dim_; ++c) {
          if (c == b) continue;
          const double gm = du(a, x, t, 0, mixed(b, c));
          Point yp = x, ym = x;
          yp[c] += h;
          ym[c] -= h;
          worst = std::max(worst, rel(gm, (du(a, yp, t, 0, unit(b)) - du(a, ym, t, 0, unit(b))) / (2.0 * h), std::abs(gm)));
        }
      }
    }
    const double pt = p_.derivative(x, t, 1, {0, 0, 0});
    worst = std::max(worst, rel(pt, (p_.value(x, t + h) - p_.value(x, t - h)) / (2.0 * h), std::abs(pt)));
    for (int b = 0; b < dim_; ++b) {
      Point xp = x, xm = x;
      xp[b] += h;
      xm[b] -= h;
      const double g = p_.derivative(x, t, 0, unit(b));
      worst = std::max(worst, rel(g, (p_.value(xp, t) - p_.value(xm, t)) / (2.0 * h), std::abs(g)));
      const double g2 = p_.derivative(x, t, 0, unit(b, 2));
      worst = std::max(worst, rel(g2, (p_.derivative(xp, t, 0, unit(b)) - p_.derivative(xm, t, 0, unit(b))) / (2.0 * h), std::abs(g2)));
    }
  }
  return worst;
}

ManufacturedCase make_conv1(const MaterialParams& m, double w1, double w2) {
  SeparableTerm phi{1.0, jet_sin_square_arg(w1), {jet_sin(w2), jet_sin(w2), jet_one()}};
  SeparableField f({phi});
  return ManufacturedCase{CaseKind::conv1, "conv1", 1.0, ManufacturedSolution(2, {f, f, SeparableField()}, f, m)};
}

ManufacturedCase make_conv2(const MaterialParams& m, double w1, double w2) {
  // a(s) = s^2 (s-1)^2, b(s) = (s-1) s (2s-1).
  const std::vector<double> a{0.0, 0.0, 1.0, -2.0, 1.0};
  const std::vector<double> b{0.0, 1.0, -3.0, 2.0};
  SeparableField u1({SeparableTerm{-2.0, jet_sin(w1), {jet_poly(a), jet_poly(b), jet_one()}}});
  SeparableField u2({SeparableTerm{2.0, jet_sin(w1), {jet_poly(b), jet_poly(a), jet_one()}}});
  SeparableField p({SeparableTerm{-2.0, jet_sin(w2), {jet_poly(a), jet_poly(b), jet_one()}}});
  return ManufacturedCase{CaseKind::conv2, "conv2", 0.0, ManufacturedSolution(2, {u1, u2, SeparableField()}, p, m)};
}

}  // namespace stbiot
