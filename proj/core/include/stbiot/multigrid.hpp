#pragma once

#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <vector>

#include "stbiot/forms.hpp"
#include "stbiot/slab.hpp"
#include "stbiot/vanka.hpp"

namespace stbiot {

// Scalar-space prolongation coarse -> fine (fine x coarse). Continuous spaces interpolate at
// fine nodes; discontinuous spaces use the cellwise L2 embedding.
SparseMatrix prolongation_scalar(const MeshLevel& coarse, const MeshLevel& fine, const ScalarSpace& cs,
                                 const ScalarSpace& fs);
// Slab prolongation: per Radau point diag(P_V, P_V, P_Q).
SparseMatrix prolongation_slab(const MeshLevel& coarse, const MeshLevel& fine, const DofMap& cd, const DofMap& fd);

struct MgLevel {
  std::shared_ptr<const SlabOperator> A;
  std::shared_ptr<VankaSmoother> smoother;  // levels >= 1
  SparseMatrix P;                            // prolongation from level l-1 (levels >= 1)
  SparseMatrix R;                            // P^T
};

class MgHierarchy {
 public:
  MgHierarchy() = default;
  int n_levels() const { return static_cast<int>(levels_.size()); }
  const MgLevel& level(int l) const { return levels_[l]; }
  const SlabOperator& finest() const { return *levels_.back().A; }

  // One V-cycle on level l with zero initial guess.
  Vector vcycle(int l, const Vector& b) const;
  Vector apply(const Vector& b) const { return vcycle(n_levels() - 1, b); }
  Vector coarse_solve(const Vector& b) const;

  // Accumulated smoother time per level in milliseconds.
  const std::vector<double>& smoother_ms() const { return smoother_ms_; }
  void reset_timers() const { std::fill(smoother_ms_.begin(), smoother_ms_.end(), 0.0); }
  std::size_t patch_memory_bytes() const;

  // Assembles from prebuilt per-level operators and prolongations.
  static MgHierarchy build(std::vector<std::shared_ptr<const SlabOperator>> ops, std::vector<SparseMatrix> prolongations,
                           std::vector<std::vector<std::vector<int>>> patch_spatial, const SmootherParams& params);

 private:
  std::vector<MgLevel> levels_;
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> coarse_;
  SmootherParams params_;
  mutable std::vector<double> smoother_ms_;
};

// Spatial indices (inside one Radau block) of every patch on a level, sorted.
std::vector<std::vector<int>> patch_spatial_indices(const MeshLevel& level, const DofMap& dofs, PatchKind kind);

// Per-level slab operators for the same time basis; builds patches and transfers.
MgHierarchy build_hierarchy_for_slab(const MeshHierarchy& mesh, const std::vector<const Discretization*>& discs,
                                     const std::vector<const FormMatrices*>& forms, const TimeBasis& tb,
                                     Formulation formulation, const SmootherParams& params);

}  // namespace stbiot
