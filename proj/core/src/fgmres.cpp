#include "stbiot/krylov.hpp"

#include <chrono>
#include <cmath>

namespace stbiot {

SolveStats fgmres(const LinearOperator& A, const Vector& b, Vector& x, const Preconditioner& M,
                  const FgmresOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  SolveStats st;
  const int n = A.size();
  if (b.size() != n) throw Error("fgmres: right-hand side has wrong dimension");
  if (x.size() != n) x = Vector::Zero(n);
  const double tol = std::max(opt.tol_abs, opt.tol_rel * b.norm());
  const int m = std::max(1, opt.max_iter);

  Vector r = b - A * x;
  double beta = r.norm();
  st.initial_residual = beta;
  int total = 0;
  while (beta > tol && total < opt.max_iter) {
    std::vector<Vector> V, Z;
    DenseMatrix H = DenseMatrix::Zero(m + 1, m);
    Vector cs = Vector::Zero(m), sn = Vector::Zero(m), g = Vector::Zero(m + 1);
    g[0] = beta;
    V.push_back(r / beta);
    int j = 0;
    for (; j < m && total < opt.max_iter; ++j) {
      Z.push_back(M ? M(V[j]) : V[j]);
      Vector w = A * Z[j];
      // Modified Gram-Schmidt with one reorthogonalisation pass.
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const double h = w.dot(V[i]);
          H(i, j) += h;
          w -= h * V[i];
        }
      H(j + 1, j) = w.norm();
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double den = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = den > 0.0 ? H(j, j) / den : 1.0;
      sn[j] = den > 0.0 ? H(j + 1, j) / den : 0.0;
      const double hsub = H(j + 1, j);
      H(j, j) = den;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++total;
      if (std::abs(g[j + 1]) <= tol || hsub <= 1e-300) {
        ++j;
        break;
      }
      V.push_back(w / hsub);
    }
    // Back substitution on the triangular part.
    Vector y = Vector::Zero(j);
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int l = i + 1; l < j; ++l) s -= H(i, l) * y[l];
      y[i] = H(i, i) != 0.0 ? s / H(i, i) : 0.0;
    }
    for (int i = 0; i < j; ++i) x += y[i] * Z[i];
    r = b - A * x;
    const double prev = beta;
    beta = r.norm();
    if (j == 0 || !(beta < prev)) break;  // stagnation
  }
  st.iterations = total;
  st.residual = beta;
  st.converged = beta <= tol;
  st.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return st;
}

}  // namespace stbiot
