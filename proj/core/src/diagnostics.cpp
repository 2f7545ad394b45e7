#include "stbiot/diagnostics.hpp"

#include <Eigen/Eigenvalues>

#include "fe_internal.hpp"

namespace stbiot {

namespace {

double min_eig(const SparseMatrix& M) {
  if (M.rows() == 0) return 0.0;
  DenseMatrix D = DenseMatrix(M);
  D = 0.5 * (D + D.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(D, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

CoercivityReport coercivity_diagnostic(const FormMatrices& forms) {
  return {min_eig(forms.elasticity), min_eig(forms.pressure)};
}

double symmetry_defect(const SparseMatrix& M) {
  const SparseMatrix T = M.transpose();
  const SparseMatrix diff = M - T;
  double dmax = 0.0, mmax = 0.0;
  for (int i = 0; i < diff.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(diff, i); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  for (int i = 0; i < M.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(M, i); it; ++it) mmax = std::max(mmax, std::abs(it.value()));
  return mmax > 0.0 ? dmax / mmax : 0.0;
}

double estimate_inf_sup(const MeshLevel& level, Pair pair, int r) {
  const DofMap dofs(level, pair, r, 0);
  const int dim = level.dim;
  const auto& V = dofs.vspace();
  const auto& Q = dofs.qspace();
  const int R = dofs.R(), S = dofs.S();
  const int nbv = V.dofs_per_cell(), nbq = Q.dofs_per_cell();
  const QuadratureRule rule = gauss_rule(r + 1, dim);
  std::vector<Point> qp(rule.points.begin(), rule.points.end());
  const ElementTable tv = tabulate(V.element(), qp);
  const ElementTable tq = tabulate(Q.element(), qp);
  DenseMatrix H = DenseMatrix::Zero(R, R), M = DenseMatrix::Zero(S, S), D = DenseMatrix::Zero(S, R);
  for (int c = 0; c < static_cast<int>(level.cells.size()); ++c) {
    const auto g = detail::cell_geom(level, c);
    const int* nd = V.cell_dofs(c);
    const int* qd = Q.cell_dofs(c);
    for (int q = 0; q < tv.nq; ++q) {
      const double w = rule.weights[q] * g.jac;
      for (int i = 0; i < nbv; ++i)
        for (int j = 0; j < nbv; ++j) {
          double s = tv.value(q, i) * tv.value(q, j);
          for (int d = 0; d < dim; ++d) s += tv.grad(q, i, d) * tv.grad(q, j, d) / (g.hs[d] * g.hs[d]);
          for (int a = 0; a < dim; ++a) H(nd[i] * dim + a, nd[j] * dim + a) += w * s;
        }
      for (int s = 0; s < nbq; ++s) {
        for (int t = 0; t < nbq; ++t) M(qd[s], qd[t]) += w * tq.value(q, s) * tq.value(q, t);
        for (int j = 0; j < nbv; ++j)
          for (int b = 0; b < dim; ++b) D(qd[s], nd[j] * dim + b) += w * tq.value(q, s) * tv.grad(q, j, b) / g.hs[b];
      }
    }
  }
  Eigen::LLT<DenseMatrix> llt(H);
  if (llt.info() != Eigen::Success) throw Error("estimate_inf_sup: H1 matrix is singular");
  const DenseMatrix Sm = D * llt.solve(D.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(0.5 * (Sm + Sm.transpose()), M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("estimate_inf_sup: L2 matrix is singular");
  return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

}  // namespace stbiot
