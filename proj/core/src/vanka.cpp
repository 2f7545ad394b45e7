#include "stbiot/vanka.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <thread>
#include <type_traits>

namespace stbiot {

const char* to_string(PatchKind k) { return k == PatchKind::vertex ? "vertex" : "cell"; }
const char* to_string(PatchSolverKind k) { return k == PatchSolverKind::dense_lu ? "dense_lu" : "time_diagonal"; }

namespace {

void check_regular(double rcond, const std::string& name) {
  if (!(rcond > 1e-14)) throw Error("singular patch matrix" + (name.empty() ? std::string() : " (" + name + ")"));
}

class DensePatch : public PatchFactorization {
 public:
  DensePatch(const LinearOperator& A, std::vector<int> global, const std::string& name) {
    global_ = std::move(global);
    lu_.compute(A.submatrix(global_));
    check_regular(lu_.rcond(), name);
  }
  Vector solve(const Vector& r) const override { return lu_.solve(r); }
  std::size_t memory_bytes() const override { return sizeof(double) * global_.size() * global_.size(); }

 private:
  Eigen::PartialPivLU<DenseMatrix> lu_;
};

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Real or complex LU of one spatial mode matrix, stored in T.
template <class T>
struct ModeLU {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  Eigen::PartialPivLU<Mat> lu;
  template <class M>
  void compute(const M& m, const std::string& name) {
    // rcond is checked on the double-precision matrix before any rounding.
    Eigen::PartialPivLU<M> check(m);
    check_regular(check.rcond(), name);
    if constexpr (std::is_same_v<typename M::Scalar, T>)
      lu = std::move(check);
    else
      lu.compute(m.template cast<T>());
  }
  template <class S>
  Eigen::Matrix<S, Eigen::Dynamic, 1> solve(const Eigen::Matrix<S, Eigen::Dynamic, 1>& r) const {
    if constexpr (std::is_same_v<S, T>)
      return lu.solve(r);
    else
      return lu.solve(r.template cast<T>()).template cast<S>();
  }
  std::size_t bytes() const { return sizeof(T) * static_cast<std::size_t>(lu.rows()) * lu.cols(); }
};

template <class Real>
class TimeDiagonalPatch : public PatchFactorization {
 public:
  TimeDiagonalPatch(const SlabOperator& A, const std::vector<int>& spatial, const std::string& name) {
    const auto& tw = A.weights();
    const int n = A.n_radau();
    ns_ = static_cast<int>(spatial.size());
    n_ = n;
    for (int m = 0; m < n; ++m)
      for (int s : spatial) global_.push_back(m * A.block_size() + s);
    DenseMatrix Xs, Ys;
    A.spatial_submatrices(spatial, Xs, Ys);
    dinv_.resize(n);
    for (int a = 0; a < n; ++a) dinv_[a] = 1.0 / tw.w0(a, a);
    DenseMatrix G = tw.w1;
    for (int a = 0; a < n; ++a) G.row(a) *= dinv_[a];
    // (D^{-1} w0) (x) X + G (x) Y with D^{-1} w0 = I and G = Q diag(lambda) Q^{-1}.
    Eigen::EigenSolver<DenseMatrix> es(G);
    if (es.info() != Eigen::Success) throw Error("time-diagonal patch: eigendecomposition failed");
    Q_ = es.eigenvectors();
    Eigen::PartialPivLU<CMatrix> qlu(Q_);
    Qinv_ = qlu.inverse();
    const auto lam = es.eigenvalues();
    // Keep one representative of each conjugate pair (positive imaginary part).
    for (int m = 0; m < n; ++m) {
      const std::complex<double> l = lam[m];
      const double tol = 1e-12 * std::abs(l);
      if (l.imag() < -tol) continue;
      Mode mode;
      mode.index = m;
      mode.weight = std::abs(l.imag()) > tol ? 2.0 : 1.0;
      mode.real = mode.weight == 1.0;
      if (mode.real) {
        mode.rlu.compute(DenseMatrix(Xs + l.real() * Ys), name);
      } else {
        mode.clu.compute(CMatrix(Xs.cast<std::complex<double>>() + l * Ys.cast<std::complex<double>>()), name);
      }
      modes_.push_back(std::move(mode));
    }
  }

  Vector solve(const Vector& r) const override {
    // z = D^{-1} r; zt = Q^{-1} z per mode; y_m = (X + lambda_m Y)^{-1} zt_m; x = Q y.
    Vector x = Vector::Zero(n_ * ns_);
    CVector zt(ns_);
    for (const auto& mode : modes_) {
      zt.setZero();
      for (int a = 0; a < n_; ++a) zt += Qinv_(mode.index, a) * (dinv_[a] * r.segment(a * ns_, ns_)).cast<std::complex<double>>();
      if (mode.real) {
        const Vector y = mode.rlu.solve(Vector(zt.real()));
        for (int a = 0; a < n_; ++a) x.segment(a * ns_, ns_) += Q_(a, mode.index).real() * y;
      } else {
        const CVector y = mode.clu.solve(zt);
        for (int a = 0; a < n_; ++a) x.segment(a * ns_, ns_) += mode.weight * (Q_(a, mode.index) * y).real();
      }
    }
    return x;
  }

  std::size_t memory_bytes() const override {
    std::size_t b = 0;
    for (const auto& m : modes_) b += m.real ? m.rlu.bytes() : m.clu.bytes();
    return b;
  }

 private:
  struct Mode {
    int index = 0;
    double weight = 1.0;
    bool real = true;
    ModeLU<Real> rlu;
    ModeLU<std::complex<Real>> clu;
  };
  int n_ = 0, ns_ = 0;
  std::vector<double> dinv_;
  CMatrix Q_, Qinv_;
  std::vector<Mode> modes_;
};

}  // namespace

std::unique_ptr<PatchFactorization> make_dense_patch(const LinearOperator& A, std::vector<int> global,
                                                     const std::string& name) {
  return std::make_unique<DensePatch>(A, std::move(global), name);
}

std::unique_ptr<PatchFactorization> make_time_diagonal_patch(const SlabOperator& A, const std::vector<int>& spatial,
                                                             const std::string& name, bool single_precision) {
  if (single_precision) return std::make_unique<TimeDiagonalPatch<float>>(A, spatial, name);
  return std::make_unique<TimeDiagonalPatch<double>>(A, spatial, name);
}

Vector vanka_apply(const PatchFactorization& patch, const LinearOperator& A, const Vector& d, const Vector& b,
                   double omega) {
  const Vector r = b - A * d;
  const auto& g = patch.global();
  Vector rl(g.size()), dl(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    rl[i] = r[g[i]];
    dl[i] = d[g[i]];
  }
  return dl + omega * patch.solve(rl);
}

VankaSmoother::VankaSmoother(const LinearOperator& A, std::vector<std::unique_ptr<PatchFactorization>> patches,
                             const SmootherParams& params)
    : A_(&A), patches_(std::move(patches)), params_(params) {
  counts_.assign(A.size(), 0.0);
  for (const auto& p : patches_)
    for (int g : p->global()) counts_[g] += 1.0;
  for (std::size_t i = 0; i < counts_.size(); ++i)
    if (counts_[i] == 0.0) throw Error("Vanka smoother: unknown " + std::to_string(i) + " is not covered by any patch");
}

std::size_t VankaSmoother::memory_bytes() const {
  std::size_t b = 0;
  for (const auto& p : patches_) b += p->memory_bytes();
  return b;
}

void VankaSmoother::sweep(Vector& d, const Vector& b) const {
  const int np = n_patches();
  Vector r;
  A_->apply(d, r);
  r = b - r;
  Vector z = Vector::Zero(d.size());
  auto local = [&](int i) {
    const auto& g = patches_[i]->global();
    Vector rl(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) rl[j] = r[g[j]];
    Vector out = params_.omega * patches_[i]->solve(rl);
    for (std::size_t j = 0; j < g.size(); ++j) out[j] += d[g[j]];
    return out;
  };
  const int nt = std::max(1, std::min(params_.threads, np));
  if (nt == 1) {
    for (int i = 0; i < np; ++i) {
      const Vector y = local(i);
      const auto& g = patches_[i]->global();
      for (std::size_t j = 0; j < g.size(); ++j) z[g[j]] += y[j];
    }
  } else if (params_.deterministic) {
    // Patch results are merged in patch order, independent of the thread schedule.
    std::vector<Vector> out(np);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (int i = t; i < np; i += nt) out[i] = local(i);
      });
    for (auto& th : pool) th.join();
    for (int i = 0; i < np; ++i) {
      const auto& g = patches_[i]->global();
      for (std::size_t j = 0; j < g.size(); ++j) z[g[j]] += out[i][j];
    }
  } else {
    std::vector<Vector> part(nt, Vector::Zero(d.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (int i = t; i < np; i += nt) {
          const Vector y = local(i);
          const auto& g = patches_[i]->global();
          for (std::size_t j = 0; j < g.size(); ++j) part[t][g[j]] += y[j];
        }
      });
    for (auto& th : pool) th.join();
    for (int t = 0; t < nt; ++t) z += part[t];
  }
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = z[i] / counts_[i];
}

void VankaSmoother::smooth(Vector& d, const Vector& b) const {
  for (int j = 0; j < params_.sweeps; ++j) sweep(d, b);
}

}  // namespace stbiot
