#pragma once

#include <memory>
#include <vector>

#include "stbiot/linear_operator.hpp"
#include "stbiot/slab.hpp"

namespace stbiot {

enum class PatchKind { vertex, cell };
enum class PatchSolverKind { dense_lu, time_diagonal };

struct SmootherParams {
  double omega = 0.7;
  int sweeps = 4;  // J_max
  int threads = 1;
  bool deterministic = true;
  PatchKind patch_kind = PatchKind::vertex;
  PatchSolverKind patch_solver = PatchSolverKind::time_diagonal;
  // Store time-diagonal patch factors in single precision (halves smoother memory traffic).
  bool single_precision = false;
};

const char* to_string(PatchKind k);
const char* to_string(PatchSolverKind k);

// Inverse action of the patch matrix A_P = A[global, global].
class PatchFactorization {
 public:
  virtual ~PatchFactorization() = default;
  const std::vector<int>& global() const { return global_; }
  int size() const { return static_cast<int>(global_.size()); }
  virtual Vector solve(const Vector& r) const = 0;
  virtual std::size_t memory_bytes() const = 0;

 protected:
  std::vector<int> global_;
};

// Partial-pivoting LU of the dense patch matrix extracted from any operator.
std::unique_ptr<PatchFactorization> make_dense_patch(const LinearOperator& A, std::vector<int> global,
                                                     const std::string& name = "");

// Exact factorization of w0 (x) X_P + w1 (x) Y_P by diagonalising D^{-1} w1 (w0 = D diagonal).
// `spatial` holds the sorted spatial indices of the patch inside one Radau block.
std::unique_ptr<PatchFactorization> make_time_diagonal_patch(const SlabOperator& A, const std::vector<int>& spatial,
                                                             const std::string& name = "", bool single_precision = false);

// S_P(d) = R_P d + omega A_P^{-1} R_P (b - A d).
Vector vanka_apply(const PatchFactorization& patch, const LinearOperator& A, const Vector& d, const Vector& b,
                   double omega);

class VankaSmoother {
 public:
  VankaSmoother() = default;
  VankaSmoother(const LinearOperator& A, std::vector<std::unique_ptr<PatchFactorization>> patches,
                const SmootherParams& params);

  // `sweeps` rounds of patch updates with averaging of overlaps.
  void smooth(Vector& d, const Vector& b) const;
  void sweep(Vector& d, const Vector& b) const;

  int n_patches() const { return static_cast<int>(patches_.size()); }
  const PatchFactorization& patch(int i) const { return *patches_[i]; }
  const std::vector<double>& counts() const { return counts_; }
  std::size_t memory_bytes() const;

 private:
  const LinearOperator* A_ = nullptr;
  std::vector<std::unique_ptr<PatchFactorization>> patches_;
  std::vector<double> counts_;
  SmootherParams params_;
};

}  // namespace stbiot
