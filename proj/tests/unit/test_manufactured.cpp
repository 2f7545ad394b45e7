#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace stbiot;
using namespace stbiot::test;

namespace {

constexpr double kPi = 3.14159265358979323846;

// rho u_tt - div(2 mu eps(u) + lambda div u I) + alpha grad p from point values of u and p only.
Vec3 fd_body_force(const ManufacturedSolution& s, const MaterialParams& m, const Point& x, double t) {
  const double h = 1e-4;
  auto u = [&](const Point& y, double tt) { return s.u(y, tt); };
  auto shift = [](Point y, int d, double e) {
    y[d] += e;
    return y;
  };
  // Second derivatives d^2 u_a / dx_b dx_c by central differences.
  auto d2 = [&](int a, int b, int c) {
    const Point pp = shift(shift(x, b, h), c, h), pm = shift(shift(x, b, h), c, -h);
    const Point mp = shift(shift(x, b, -h), c, h), mm = shift(shift(x, b, -h), c, -h);
    return (u(pp, t)[a] - u(pm, t)[a] - u(mp, t)[a] + u(mm, t)[a]) / (4 * h * h);
  };
  Vec3 f{0.0, 0.0, 0.0};
  for (int a = 0; a < 2; ++a) {
    const double utt = (u(x, t + h)[a] - 2 * u(x, t)[a] + u(x, t - h)[a]) / (h * h);
    double div_sigma = 0.0;
    for (int b = 0; b < 2; ++b) {
      div_sigma += m.mu * (d2(a, b, b) + d2(b, a, b));
      div_sigma += m.lambda * d2(b, b, a);
    }
    const double dp = (s.p(shift(x, a, h), t) - s.p(shift(x, a, -h), t)) / (2 * h);
    f[a] = m.rho * utt - div_sigma + m.alpha * dp;
  }
  return f;
}

double fd_source(const ManufacturedSolution& s, const MaterialParams& m, const Point& x, double t) {
  const double h = 1e-4;
  auto shift = [](Point y, int d, double e) {
    y[d] += e;
    return y;
  };
  const double pt = (s.p(x, t + h) - s.p(x, t - h)) / (2 * h);
  double div_ut = 0.0, lap = 0.0;
  for (int a = 0; a < 2; ++a) {
    auto ua = [&](const Point& y, double tt) { return s.u(y, tt)[a]; };
    div_ut += (ua(shift(x, a, h), t + h) - ua(shift(x, a, h), t - h) - ua(shift(x, a, -h), t + h) +
               ua(shift(x, a, -h), t - h)) /
              (4 * h * h);
    lap += (s.p(shift(x, a, h), t) - 2 * s.p(x, t) + s.p(shift(x, a, -h), t)) / (h * h);
  }
  return m.c0 * pt + m.alpha * div_ut - lap;
}

}  // namespace

TEST_SUITE("manufactured") {
  TEST_CASE("conv1 fields") {
    const ManufacturedCase c = make_conv1(conv_material());
    CHECK(c.t_start == doctest::Approx(1.0));
    const Point x{0.3, 0.7, 0.0};
    const double t = 1.4;
    const double phi = std::sin(kPi * t * t) * std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
    CHECK(c.solution.u(x, t)[0] == doctest::Approx(phi));
    CHECK(c.solution.u(x, t)[1] == doctest::Approx(phi));
    CHECK(c.solution.p(x, t) == doctest::Approx(phi));
    CHECK(c.solution.v(x, t)[0] == doctest::Approx(2 * kPi * t * std::cos(kPi * t * t) * std::sin(kPi * x[0]) * std::sin(kPi * x[1])));
  }

  TEST_CASE("conv2 displacement is divergence free and starts at rest") {
    const ManufacturedCase c = make_conv2(conv_material());
    CHECK(c.t_start == 0.0);
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
      const Point x{U(gen), U(gen), 0.0};
      const double t = U(gen);
      const Mat3 g = c.solution.grad_u(x, t);
      CHECK(std::abs(g[0][0] + g[1][1]) < 1e-12);
      CHECK(c.solution.u(x, 0.0)[0] == 0.0);
    }
  }

  TEST_CASE("source terms satisfy the PDE at random points") {
    const MaterialParams m = conv_material();
    std::mt19937 gen(6);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    for (const ManufacturedCase& c : {make_conv1(m), make_conv2(m, 4.0 * kPi, 2.0 * kPi)}) {
      for (int i = 0; i < 5; ++i) {
        const Point x{U(gen), U(gen), 0.0};
        const double t = c.t_start + U(gen);
        const Vec3 f = c.solution.body_force(x, t);
        const Vec3 fd = fd_body_force(c.solution, m, x, t);
        const double scale = std::max({1.0, std::abs(f[0]), std::abs(f[1])});
        CHECK(std::abs(f[0] - fd[0]) / scale < 1e-4);
        CHECK(std::abs(f[1] - fd[1]) / scale < 1e-4);
        const double g = c.solution.source(x, t);
        CHECK(std::abs(g - fd_source(c.solution, m, x, t)) / std::max(1.0, std::abs(g)) < 1e-4);
      }
    }
  }

  TEST_CASE("analytic derivatives agree with differences") {
    const MaterialParams m = conv_material();
    std::vector<std::pair<Point, double>> samples;
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 8; ++i) samples.push_back({{U(gen), U(gen), 0.0}, 1.0 + U(gen)});
    CHECK(make_conv1(m).solution.finite_difference_check(samples) < 1e-6);
  }

  TEST_CASE("Dirichlet data carries the exact traces") {
    const ManufacturedCase c = make_conv1(conv_material());
    const ProblemData d = c.solution.dirichlet_data();
    const Point x{0.0, 0.4, 0.0};
    CHECK(d.u_dirichlet(x, 1.3)[0] == doctest::Approx(c.solution.u(x, 1.3)[0]));
    CHECK(d.v_dirichlet(x, 1.3)[1] == doctest::Approx(c.solution.v(x, 1.3)[1]));
    CHECK(d.p0(Point{0.2, 0.3, 0.0}, 1.0) == doctest::Approx(c.solution.p(Point{0.2, 0.3, 0.0}, 1.0)));
  }
}
