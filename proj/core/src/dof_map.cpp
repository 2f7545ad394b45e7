#include "stbiot/dof_map.hpp"

#include <algorithm>

namespace stbiot {

const char* to_string(Pair p) { return p == Pair::qq ? "qq" : "qpdisc"; }

ScalarSpace::ScalarSpace(const MeshLevel& level, ElementFamily family, int degree)
    : element_(family, degree, level.dim) {
  const int nb = element_.size();
  const int nc = static_cast<int>(level.cells.size());
  cell_dofs_.resize(static_cast<std::size_t>(nc) * nb);
  if (!element_.continuous()) {
    for (int c = 0; c < nc; ++c)
      for (int i = 0; i < nb; ++i) cell_dofs_[static_cast<std::size_t>(c) * nb + i] = c * nb + i;
    n_ = nc * nb;
    return;
  }
  // Nodes live on the integer lattice cell_index * degree + local index per axis.
  const auto ncell = level.lattice_size();
  std::array<int, 3> nn{1, 1, 1};
  for (int d = 0; d < level.dim; ++d) nn[d] = ncell[d] * degree + 1;
  std::vector<int> key(static_cast<std::size_t>(nn[0]) * nn[1] * nn[2], -1);
  auto flat = [&](const std::array<int, 3>& k) { return (static_cast<std::size_t>(k[2]) * nn[1] + k[1]) * nn[0] + k[0]; };
  auto node_key = [&](int c, int i) {
    std::array<int, 3> k{0, 0, 0};
    for (int d = 0; d < level.dim; ++d) k[d] = level.cells[c].index[d] * degree + element_.multi_index(i)[d];
    return k;
  };
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < nb; ++i) key[flat(node_key(c, i))] = 0;
  // Number in lexicographic lattice order so ids do not depend on the cell loop.
  n_ = 0;
  for (auto& v : key)
    if (v == 0) v = n_++;
  nodes_.resize(n_);
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < nb; ++i) {
      const int g = key[flat(node_key(c, i))];
      cell_dofs_[static_cast<std::size_t>(c) * nb + i] = g;
      const Point xi = element_.node(i);
      const Box& b = level.cells[c].box;
      Point x{0.0, 0.0, 0.0};
      for (int d = 0; d < level.dim; ++d) x[d] = map_to_interval(xi[d], b.lo[d], b.hi[d]);
      nodes_[g] = x;
    }
}

DofMap::DofMap(const MeshLevel& level, Pair pair, int r, int k)
    : dim_(level.dim), r_(r), k_(k), level_(level.level), pair_(pair) {
  if (r < 2) throw ConfigError("unsupported element pair: r must be >= 2 (got " + std::to_string(r) + ")");
  if (k < 0) throw ConfigError("time degree k must be >= 0");
  vspace_ = ScalarSpace(level, ElementFamily::q_continuous, r);
  qspace_ = pair == Pair::qq ? ScalarSpace(level, ElementFamily::q_continuous, r - 1)
                             : ScalarSpace(level, ElementFamily::p_discontinuous, r - 1);
  R_ = dim_ * vspace_.size();
  S_ = qspace_.size();
}

DofMap build_dof_map(const MeshLevel& level, Pair pair, int r, int k) { return DofMap(level, pair, r, k); }

DofInfo DofMap::decode(int global) const {
  if (global < 0 || global >= size()) throw Error("DofMap::decode: index out of range");
  DofInfo info;
  info.radau = global / block_size();
  int rem = global % block_size();
  if (rem < R_) {
    info.field = Field::v;
    info.spatial = rem;
  } else if (rem < 2 * R_) {
    info.field = Field::u;
    info.spatial = rem - R_;
  } else {
    info.field = Field::p;
    info.spatial = rem - 2 * R_;
  }
  return info;
}

void DofMap::cell_vector_dofs(int c, std::vector<int>& out) const {
  const int nb = vspace_.dofs_per_cell();
  out.resize(static_cast<std::size_t>(nb) * dim_);
  const int* nodes = vspace_.cell_dofs(c);
  for (int i = 0; i < nb; ++i)
    for (int a = 0; a < dim_; ++a) out[i * dim_ + a] = nodes[i] * dim_ + a;
}

PatchDofs DofMap::patch_dofs(const MeshLevel& level, const Patch& patch) const {
  (void)level;
  PatchDofs pd;
  std::vector<int> tmp;
  for (int c : patch.cells) {
    cell_vector_dofs(c, tmp);
    pd.vec.insert(pd.vec.end(), tmp.begin(), tmp.end());
    const int* q = qspace_.cell_dofs(c);
    pd.scal.insert(pd.scal.end(), q, q + qspace_.dofs_per_cell());
  }
  for (auto* v : {&pd.vec, &pd.scal}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return pd;
}

std::vector<int> DofMap::patch_global(const PatchDofs& pd) const {
  std::vector<int> g;
  g.reserve(static_cast<std::size_t>(n_radau()) * pd.spatial_size());
  for (int m = 0; m < n_radau(); ++m) {
    for (int i : pd.vec) g.push_back(index(Field::v, m, i));
    for (int i : pd.vec) g.push_back(index(Field::u, m, i));
    for (int i : pd.scal) g.push_back(index(Field::p, m, i));
  }
  return g;
}

}  // namespace stbiot
