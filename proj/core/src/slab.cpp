#include "stbiot/slab.hpp"

#include <algorithm>

namespace stbiot {

const char* to_string(Formulation f) { return f == Formulation::dsa ? "dsa" : "ds"; }

namespace {

inline int find_sorted(const std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  return (it != v.end() && *it == x) ? static_cast<int>(it - v.begin()) : -1;
}

void add_block(std::vector<Triplet>& t, const SparseMatrix& M, int row0, int col0, double s) {
  for (int i = 0; i < M.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(M, i); it; ++it) t.emplace_back(row0 + it.row(), col0 + it.col(), s * it.value());
}

}  // namespace

DenseMatrix extract_submatrix(const SparseMatrix& A, const std::vector<int>& idx) {
  const int n = static_cast<int>(idx.size());
  DenseMatrix S = DenseMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (SparseMatrix::InnerIterator it(A, idx[i]); it; ++it) {
      const int j = find_sorted(idx, static_cast<int>(it.col()));
      if (j >= 0) S(i, j) += it.value();
    }
  return S;
}

DenseMatrix SparseOperator::submatrix(const std::vector<int>& idx) const { return extract_submatrix(A_, idx); }

TemporalWeights temporal_weights(const TimeBasis& tb) {
  const int n = tb.size();
  const auto& rule = tb.radau();
  TemporalWeights tw;
  tw.tau = tb.tau();
  tw.w0 = DenseMatrix::Zero(n, n);
  tw.w1 = DenseMatrix::Zero(n, n);
  tw.left.resize(n);
  for (int a = 0; a < n; ++a) tw.left[a] = tb.left_value(a);
  for (int a = 0; a < n; ++a) {
    tw.w0(a, a) = 0.5 * tw.tau * rule.weights[a];
    for (int b = 0; b < n; ++b)
      tw.w1(a, b) = rule.weights[a] * tb.reference_derivative(b, rule.points[a]) + tw.left[a] * tw.left[b];
  }
  return tw;
}

SlabOperator::SlabOperator(const FormMatrices& f, const TemporalWeights& tw, Formulation formulation)
    : tw_(tw), formulation_(formulation) {
  R_ = static_cast<int>(f.mass_v.rows());
  S_ = static_cast<int>(f.mass_q.rows());
  block_ = 2 * R_ + S_;
  n_radau_ = static_cast<int>(tw.w0.rows());
  std::vector<Triplet> tx, ty;
  const int v0 = 0, u0 = R_, p0 = 2 * R_;
  add_block(tx, f.mass_v, v0, v0, -1.0);
  add_block(tx, f.elasticity, u0, u0, 1.0);
  add_block(tx, SparseMatrix(f.coupling.transpose()), u0, p0, 1.0);
  add_block(tx, f.pressure, p0, p0, 1.0);
  add_block(ty, f.mass_v, v0, u0, 1.0);
  add_block(ty, f.mass_v, u0, v0, 1.0);
  add_block(ty, f.mass_q, p0, p0, 1.0);
  if (formulation == Formulation::dsa)
    add_block(tx, f.coupling, p0, v0, -1.0);
  else
    add_block(ty, f.coupling, p0, u0, -1.0);
  X_.resize(block_, block_);
  X_.setFromTriplets(tx.begin(), tx.end());
  Y_.resize(block_, block_);
  Y_.setFromTriplets(ty.begin(), ty.end());
}

SlabOperator assemble_slab_matrix(const FormMatrices& forms, const TimeBasis& tb, Formulation formulation) {
  return SlabOperator(forms, temporal_weights(tb), formulation);
}

void SlabOperator::apply(const Vector& x, Vector& y) const {
  const int n = n_radau_;
  y.setZero(size());
  Vector xb(block_), yb(block_);
  for (int b = 0; b < n; ++b) {
    xb = x.segment(b * block_, block_);
    yb.noalias() = X_ * xb;
    for (int a = 0; a < n; ++a)
      if (tw_.w0(a, b) != 0.0) y.segment(a * block_, block_) += tw_.w0(a, b) * yb;
    yb.noalias() = Y_ * xb;
    for (int a = 0; a < n; ++a)
      if (tw_.w1(a, b) != 0.0) y.segment(a * block_, block_) += tw_.w1(a, b) * yb;
  }
}

Vector SlabOperator::residual_extended(const Vector& x, const Vector& b) const {
  using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const int n = n_radau_;
  LVector y = b.cast<long double>();
  for (int pass = 0; pass < 2; ++pass) {
    const SparseMatrix& M = pass == 0 ? X_ : Y_;
    const DenseMatrix& w = pass == 0 ? tw_.w0 : tw_.w1;
    for (int a = 0; a < n; ++a)
      for (int row = 0; row < block_; ++row) {
        long double s = 0.0L;
        for (SparseMatrix::InnerIterator it(M, row); it; ++it)
          for (int c = 0; c < n; ++c)
            if (w(a, c) != 0.0)
              s += static_cast<long double>(w(a, c)) * static_cast<long double>(it.value()) *
                   static_cast<long double>(x[c * block_ + it.col()]);
        y[a * block_ + row] -= s;
      }
  }
  return y.cast<double>();
}

void SlabOperator::spatial_submatrices(const std::vector<int>& s, DenseMatrix& Xs, DenseMatrix& Ys) const {
  Xs = extract_submatrix(X_, s);
  Ys = extract_submatrix(Y_, s);
}

DenseMatrix SlabOperator::submatrix(const std::vector<int>& idx) const {
  const int n = static_cast<int>(idx.size());
  DenseMatrix S = DenseMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int mi = idx[i] / block_, si = idx[i] % block_;
    for (int pass = 0; pass < 2; ++pass) {
      const SparseMatrix& M = pass == 0 ? X_ : Y_;
      const DenseMatrix& w = pass == 0 ? tw_.w0 : tw_.w1;
      for (SparseMatrix::InnerIterator it(M, si); it; ++it)
        for (int mj = 0; mj < n_radau_; ++mj) {
          const int j = find_sorted(idx, mj * block_ + static_cast<int>(it.col()));
          if (j >= 0) S(i, j) += w(mi, mj) * it.value();
        }
    }
  }
  return S;
}

SparseMatrix SlabOperator::assemble() const {
  std::vector<Triplet> t;
  for (int a = 0; a < n_radau_; ++a)
    for (int b = 0; b < n_radau_; ++b) {
      if (tw_.w0(a, b) != 0.0) add_block(t, X_, a * block_, b * block_, tw_.w0(a, b));
      if (tw_.w1(a, b) != 0.0) add_block(t, Y_, a * block_, b * block_, tw_.w1(a, b));
    }
  SparseMatrix A(size(), size());
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

Vector assemble_slab_rhs(const ProblemData& data, const TraceState& prev, const Discretization& disc,
                         const FormMatrices& forms, const TimeBasis& tb, Formulation formulation) {
  const DofMap& dofs = disc.dofs();
  const int R = dofs.R(), S = dofs.S(), block = dofs.block_size();
  if (tb.size() != dofs.n_radau()) throw Error("assemble_slab_rhs: time basis degree does not match the DoF map");
  const int n = tb.size();
  Vector rhs = Vector::Zero(n * block);
  const Vector Mu = forms.mass_v * prev.u;
  const Vector Mv = forms.mass_v * prev.v;
  Vector Mp = forms.mass_q * prev.p;
  if (formulation == Formulation::ds) {
    const double alpha = disc.material().alpha;
    Mp += alpha * (forms.divergence * prev.u) - alpha * disc.normal_flux(data.u_dirichlet, tb.t_start());
  }
  Vector F, G;
  for (int a = 0; a < n; ++a) {
    const double ta = tb.node(a);
    const double w = 0.5 * tb.tau() * tb.radau().weights[a];
    const double l = tb.left_value(a);
    disc.functionals(data, ta, F, G);
    rhs.segment(a * block, R) = l * Mu;
    rhs.segment(a * block + R, R) = w * F + l * Mv;
    rhs.segment(a * block + 2 * R, S) = w * G + l * Mp;
  }
  return rhs;
}

TraceState project_initial_data(const ProblemData& data, const Discretization& disc, double t0) {
  TraceState s;
  s.t = t0;
  s.u = disc.project_vector(data.u0, t0);
  s.v = disc.project_vector(data.u1, t0);
  s.p = disc.project_scalar(data.p0, t0);
  return s;
}

SlabBlocks extract_blocks(const DofMap& dofs, const Vector& X, int m) {
  const int R = dofs.R(), S = dofs.S(), off = m * dofs.block_size();
  return {X.segment(off, R), X.segment(off + R, R), X.segment(off + 2 * R, S)};
}

}  // namespace stbiot
