#include "stbiot/multigrid.hpp"

#include <chrono>
#include <cmath>

#include "fe_internal.hpp"

namespace stbiot {

SparseMatrix prolongation_scalar(const MeshLevel& coarse, const MeshLevel& fine, const ScalarSpace& cs,
                                 const ScalarSpace& fs) {
  const int dim = fine.dim;
  const ScalarElement& ce = cs.element();
  const ScalarElement& fe = fs.element();
  const int nbc = ce.size(), nbf = fe.size();
  std::vector<Triplet> trip;
  std::vector<double> val(nbc);
  if (cs.continuous() != fs.continuous()) throw Error("prolongation: mismatched space families");
  if (fs.continuous()) {
    std::vector<char> done(fs.size(), 0);
    for (int c = 0; c < static_cast<int>(fine.cells.size()); ++c) {
      const int pc = fine.cells[c].parent;
      const auto gp = detail::cell_geom(coarse, pc);
      const int* fd = fs.cell_dofs(c);
      const int* cd = cs.cell_dofs(pc);
      for (int i = 0; i < nbf; ++i) {
        if (done[fd[i]]) continue;
        done[fd[i]] = 1;
        const Point& x = fs.node(fd[i]);
        Point xi{0.0, 0.0, 0.0};
        for (int d = 0; d < dim; ++d) xi[d] = (x[d] - gp.center[d]) / gp.hs[d];
        ce.values(xi, val.data());
        for (int j = 0; j < nbc; ++j)
          if (std::abs(val[j]) > 1e-14) trip.emplace_back(fd[i], cd[j], val[j]);
      }
    }
  } else {
    const QuadratureRule rule = gauss_rule(fe.degree() + 1, dim);
    std::vector<Point> qp(rule.points.begin(), rule.points.end());
    const ElementTable tf = tabulate(fe, qp);
    for (int c = 0; c < static_cast<int>(fine.cells.size()); ++c) {
      const int pc = fine.cells[c].parent;
      const auto gp = detail::cell_geom(coarse, pc);
      const auto gf = detail::cell_geom(fine, c);
      DenseMatrix Mf = DenseMatrix::Zero(nbf, nbf), B = DenseMatrix::Zero(nbf, nbc);
      for (int q = 0; q < tf.nq; ++q) {
        const Point x = detail::to_physical(gf, qp[q], dim);
        Point xi{0.0, 0.0, 0.0};
        for (int d = 0; d < dim; ++d) xi[d] = (x[d] - gp.center[d]) / gp.hs[d];
        ce.values(xi, val.data());
        for (int i = 0; i < nbf; ++i) {
          for (int j = 0; j < nbf; ++j) Mf(i, j) += rule.weights[q] * tf.value(q, i) * tf.value(q, j);
          for (int j = 0; j < nbc; ++j) B(i, j) += rule.weights[q] * tf.value(q, i) * val[j];
        }
      }
      const DenseMatrix Pl = Mf.ldlt().solve(B);
      const int* fd = fs.cell_dofs(c);
      const int* cd = cs.cell_dofs(pc);
      for (int i = 0; i < nbf; ++i)
        for (int j = 0; j < nbc; ++j)
          if (std::abs(Pl(i, j)) > 1e-14) trip.emplace_back(fd[i], cd[j], Pl(i, j));
    }
  }
  SparseMatrix P(fs.size(), cs.size());
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

SparseMatrix prolongation_slab(const MeshLevel& coarse, const MeshLevel& fine, const DofMap& cd, const DofMap& fd) {
  if (cd.k() != fd.k() || cd.pair() != fd.pair() || cd.r() != fd.r()) throw Error("prolongation: incompatible DoF maps");
  const int dim = fine.dim;
  const SparseMatrix Pv = prolongation_scalar(coarse, fine, cd.vspace(), fd.vspace());
  const SparseMatrix Pq = prolongation_scalar(coarse, fine, cd.qspace(), fd.qspace());
  std::vector<Triplet> trip;
  for (int m = 0; m < fd.n_radau(); ++m) {
    for (int i = 0; i < Pv.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(Pv, i); it; ++it)
        for (int a = 0; a < dim; ++a) {
          const int fi = static_cast<int>(it.row()) * dim + a, ci = static_cast<int>(it.col()) * dim + a;
          trip.emplace_back(fd.index(Field::v, m, fi), cd.index(Field::v, m, ci), it.value());
          trip.emplace_back(fd.index(Field::u, m, fi), cd.index(Field::u, m, ci), it.value());
        }
    for (int i = 0; i < Pq.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(Pq, i); it; ++it)
        trip.emplace_back(fd.index(Field::p, m, static_cast<int>(it.row())),
                          cd.index(Field::p, m, static_cast<int>(it.col())), it.value());
  }
  SparseMatrix P(fd.size(), cd.size());
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

std::vector<std::vector<int>> patch_spatial_indices(const MeshLevel& level, const DofMap& dofs, PatchKind kind) {
  const auto patches = kind == PatchKind::vertex ? collect_patches(level) : collect_cell_patches(level);
  std::vector<std::vector<int>> out;
  out.reserve(patches.size());
  const int R = dofs.R();
  for (const auto& p : patches) {
    const PatchDofs pd = dofs.patch_dofs(level, p);
    std::vector<int> s;
    s.reserve(pd.spatial_size());
    for (int i : pd.vec) s.push_back(i);
    for (int i : pd.vec) s.push_back(R + i);
    for (int i : pd.scal) s.push_back(2 * R + i);
    out.push_back(std::move(s));
  }
  return out;
}

MgHierarchy MgHierarchy::build(std::vector<std::shared_ptr<const SlabOperator>> ops,
                               std::vector<SparseMatrix> prolongations,
                               std::vector<std::vector<std::vector<int>>> patch_spatial, const SmootherParams& params) {
  MgHierarchy H;
  H.params_ = params;
  const int L = static_cast<int>(ops.size());
  if (L == 0) throw Error("multigrid hierarchy needs at least one level");
  H.levels_.resize(L);
  H.smoother_ms_.assign(L, 0.0);
  for (int l = 0; l < L; ++l) {
    auto& lev = H.levels_[l];
    lev.A = ops[l];
    if (l == 0) continue;
    lev.P = std::move(prolongations[l]);
    lev.R = lev.P.transpose();
    std::vector<std::unique_ptr<PatchFactorization>> patches;
    const auto& ps = patch_spatial[l];
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string name = "level " + std::to_string(l) + " patch " + std::to_string(i);
      if (params.patch_solver == PatchSolverKind::time_diagonal) {
        patches.push_back(make_time_diagonal_patch(*lev.A, ps[i], name, params.single_precision));
      } else {
        std::vector<int> g;
        for (int m = 0; m < lev.A->n_radau(); ++m)
          for (int s : ps[i]) g.push_back(m * lev.A->block_size() + s);
        patches.push_back(make_dense_patch(*lev.A, std::move(g), name));
      }
    }
    lev.smoother = std::make_shared<VankaSmoother>(*lev.A, std::move(patches), params);
  }
  H.coarse_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  const Eigen::SparseMatrix<double> A0 = ops[0]->assemble();
  H.coarse_->analyzePattern(A0);
  H.coarse_->factorize(A0);
  if (H.coarse_->info() != Eigen::Success) throw Error("coarse-level factorization failed: " + H.coarse_->lastErrorMessage());
  return H;
}

Vector MgHierarchy::coarse_solve(const Vector& b) const {
  Vector x = coarse_->solve(b);
  if (coarse_->info() != Eigen::Success) throw Error("coarse-level solve failed");
  return x;
}

Vector MgHierarchy::vcycle(int l, const Vector& b) const {
  if (l == 0) return coarse_solve(b);
  const auto& lev = levels_[l];
  Vector d = Vector::Zero(b.size());
  auto t0 = std::chrono::steady_clock::now();
  lev.smoother->smooth(d, b);
  smoother_ms_[l] += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  Vector r;
  lev.A->apply(d, r);
  r = b - r;
  const Vector rc = lev.R * r;
  const Vector e = vcycle(l - 1, rc);
  d += lev.P * e;
  t0 = std::chrono::steady_clock::now();
  lev.smoother->smooth(d, b);
  smoother_ms_[l] += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return d;
}

std::size_t MgHierarchy::patch_memory_bytes() const {
  std::size_t b = 0;
  for (const auto& l : levels_)
    if (l.smoother) b += l.smoother->memory_bytes();
  return b;
}

MgHierarchy build_hierarchy_for_slab(const MeshHierarchy& mesh, const std::vector<const Discretization*>& discs,
                                     const std::vector<const FormMatrices*>& forms, const TimeBasis& tb,
                                     Formulation formulation, const SmootherParams& params) {
  const int L = static_cast<int>(discs.size());
  if (static_cast<int>(forms.size()) != L || L > mesh.n_levels()) throw Error("hierarchy: level count mismatch");
  const TemporalWeights tw = temporal_weights(tb);
  std::vector<std::shared_ptr<const SlabOperator>> ops;
  std::vector<SparseMatrix> pro(L);
  std::vector<std::vector<std::vector<int>>> ps(L);
  for (int l = 0; l < L; ++l) {
    ops.push_back(std::make_shared<SlabOperator>(*forms[l], tw, formulation));
    if (l > 0) {
      pro[l] = prolongation_slab(discs[l - 1]->mesh(), discs[l]->mesh(), discs[l - 1]->dofs(), discs[l]->dofs());
      ps[l] = patch_spatial_indices(discs[l]->mesh(), discs[l]->dofs(), params.patch_kind);
    }
  }
  return MgHierarchy::build(std::move(ops), std::move(pro), std::move(ps), params);
}

}  // namespace stbiot
