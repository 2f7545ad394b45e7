#include "stbiot/problem.hpp"

#include <Eigen/Eigenvalues>

namespace stbiot {

std::pair<double, double> MaterialParams::lame_from_young(double E, double nu) {
  if (!(E > 0.0) || !(nu > -1.0 && nu < 0.5)) throw ConfigError("need E > 0 and -1 < nu < 0.5");
  const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = E / (2.0 * (1.0 + nu));
  return {lambda, mu};
}

void MaterialParams::set_young(double E, double nu) {
  const auto [l, m] = lame_from_young(E, nu);
  lambda = l;
  mu = m;
}

void MaterialParams::validate(int dim) const {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(c0 > 0.0)) throw ConfigError("c0 must be positive");
  // Isotropic C is positive definite on symmetric tensors iff mu > 0 and d*lambda + 2 mu > 0.
  if (!(mu > 0.0) || !(dim * lambda + 2.0 * mu > 0.0)) throw ConfigError("elasticity tensor is not positive definite");
  Eigen::MatrixXd Km(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) Km(a, b) = K[a][b];
  if ((Km - Km.transpose()).cwiseAbs().maxCoeff() > 1e-14 * Km.cwiseAbs().maxCoeff())
    throw ConfigError("permeability K must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Km);
  if (!(es.eigenvalues().minCoeff() > 0.0)) throw ConfigError("permeability K must be positive definite");
}

NitscheParams NitscheParams::defaults(int r) {
  NitscheParams p;
  p.gamma_a = 5e4 * r * (r + 1);
  p.gamma_b = 0.5 * r * (r - 1);
  p.gamma = p.gamma_b;
  return p;
}

}  // namespace stbiot
