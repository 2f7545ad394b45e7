#pragma once

#include <vector>

#include "stbiot/basis.hpp"
#include "stbiot/mesh.hpp"

namespace stbiot {

enum class Pair { qq, qpdisc };

const char* to_string(Pair p);

// Scalar finite element space on one mesh level.
class ScalarSpace {
 public:
  ScalarSpace() = default;
  ScalarSpace(const MeshLevel& level, ElementFamily family, int degree);

  const ScalarElement& element() const { return element_; }
  int size() const { return n_; }
  int dofs_per_cell() const { return element_.size(); }
  const int* cell_dofs(int c) const { return &cell_dofs_[static_cast<std::size_t>(c) * element_.size()]; }
  bool continuous() const { return element_.continuous(); }
  // Physical coordinates of node i (continuous spaces only).
  const Point& node(int i) const { return nodes_[i]; }

 private:
  ScalarElement element_;
  int n_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<Point> nodes_;
};

enum class Field { v = 0, u = 1, p = 2 };

struct DofInfo {
  Field field = Field::v;
  int radau = 0;
  int spatial = 0;  // vector index (node * dim + comp) for v/u, scalar index for p
};

// Patch DoFs in spatial (vector/scalar) numbering, both sorted ascending.
struct PatchDofs {
  std::vector<int> vec;
  std::vector<int> scal;
  int spatial_size() const { return static_cast<int>(2 * vec.size() + scal.size()); }
};

// Global numbering of slab unknowns: per Radau point m the blocks (V, U, P).
class DofMap {
 public:
  DofMap() = default;
  DofMap(const MeshLevel& level, Pair pair, int r, int k);

  int dim() const { return dim_; }
  int r() const { return r_; }
  int k() const { return k_; }
  Pair pair() const { return pair_; }
  int level() const { return level_; }
  const ScalarSpace& vspace() const { return vspace_; }
  const ScalarSpace& qspace() const { return qspace_; }

  int R() const { return R_; }
  int S() const { return S_; }
  int block_size() const { return 2 * R_ + S_; }
  int n_radau() const { return k_ + 1; }
  int size() const { return (k_ + 1) * block_size(); }

  int index(Field f, int m, int spatial) const {
    const int off = f == Field::v ? 0 : (f == Field::u ? R_ : 2 * R_);
    return m * block_size() + off + spatial;
  }
  DofInfo decode(int global) const;

  // Vector DoFs of cell c: entries node * dim + comp in local order (node, comp).
  void cell_vector_dofs(int c, std::vector<int>& out) const;

  PatchDofs patch_dofs(const MeshLevel& level, const Patch& patch) const;
  // Sorted global indices of a patch over all Radau points: Radau-major, then (V, U, P).
  std::vector<int> patch_global(const PatchDofs& pd) const;

 private:
  int dim_ = 0, r_ = 0, k_ = 0, level_ = 0;
  Pair pair_ = Pair::qpdisc;
  ScalarSpace vspace_, qspace_;
  int R_ = 0, S_ = 0;
};

DofMap build_dof_map(const MeshLevel& level, Pair pair, int r, int k);

}  // namespace stbiot
