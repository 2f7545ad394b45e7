#pragma once

#include "stbiot/forms.hpp"

namespace stbiot {

struct CoercivityReport {
  double lambda_min_A = 0.0;
  double lambda_min_B = 0.0;
};

// Smallest eigenvalues of the symmetrized elasticity and pressure matrices (dense).
CoercivityReport coercivity_diagnostic(const FormMatrices& forms);

// Discrete inf-sup constant of (V_h, Q_h) with the full H1 norm on V_h and L2 on Q_h (dense).
double estimate_inf_sup(const MeshLevel& level, Pair pair, int r);

// Symmetry defect max|M - M^T| / max|M|.
double symmetry_defect(const SparseMatrix& M);

}  // namespace stbiot
