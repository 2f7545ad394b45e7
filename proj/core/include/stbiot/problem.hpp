#pragma once

#include <functional>

#include "stbiot/common.hpp"

namespace stbiot {

struct MaterialParams {
  double rho = 1.0;
  double alpha = 0.9;
  double c0 = 0.01;
  double lambda = 1.0;
  double mu = 1.0;
  Mat3 K{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};

  static std::pair<double, double> lame_from_young(double E, double nu);
  void set_young(double E, double nu);
  // Throws ConfigError if the parameters violate positivity/definiteness.
  void validate(int dim) const;
};

struct NitscheParams {
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double gamma = 0.0;  // SIP penalty

  static NitscheParams defaults(int r);
};

using ScalarFn = std::function<double(const Point&, double)>;
using VectorFn = std::function<Vec3(const Point&, double)>;

// Data of the first-order system. `body_force` is the full momentum source rho*f.
// Empty handles mean zero.
struct ProblemData {
  VectorFn body_force;
  ScalarFn source;       // g
  VectorFn u_dirichlet;  // u_D
  VectorFn v_dirichlet;  // v_D = d/dt u_D
  VectorFn traction;     // t_N
  ScalarFn p_dirichlet;  // p_D
  ScalarFn p_neumann;    // p_N
  VectorFn u0, u1;
  ScalarFn p0;
};

inline Vec3 eval(const VectorFn& f, const Point& x, double t) { return f ? f(x, t) : Vec3{0.0, 0.0, 0.0}; }
inline double eval(const ScalarFn& f, const Point& x, double t) { return f ? f(x, t) : 0.0; }

}  // namespace stbiot
