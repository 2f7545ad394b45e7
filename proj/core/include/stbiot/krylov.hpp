#pragma once

#include <functional>
#include <vector>

#include "stbiot/linear_operator.hpp"

namespace stbiot {

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;          // true residual norm at exit
  double initial_residual = 0.0;
  bool converged = false;
  double wall_ms = 0.0;
  std::vector<double> smoother_ms;  // per multigrid level
};

struct FgmresOptions {
  double tol_abs = 1e-8;
  double tol_rel = 0.0;  // optional floor tol_rel * ||b||
  int max_iter = 100;
};

using Preconditioner = std::function<Vector(const Vector&)>;

// Flexible GMRES, right preconditioned, started from the given x.
SolveStats fgmres(const LinearOperator& A, const Vector& b, Vector& x, const Preconditioner& M,
                  const FgmresOptions& opt = {});

}  // namespace stbiot
