#include "stbiot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace stbiot {

namespace {

constexpr double kGeomTol = 1e-12;

bool near(double a, double b) { return std::abs(a - b) <= kGeomTol * std::max(1.0, std::abs(a) + std::abs(b)); }

bool lex_less(const std::array<int, 3>& a, const std::array<int, 3>& b) {
  if (a[2] != b[2]) return a[2] < b[2];
  if (a[1] != b[1]) return a[1] < b[1];
  return a[0] < b[0];
}

std::string point_str(const Point& p, int dim) {
  std::ostringstream os;
  os << "(";
  for (int d = 0; d < dim; ++d) os << (d ? ", " : "") << p[d];
  os << ")";
  return os.str();
}

}  // namespace

DomainSpec DomainSpec::unit_square(int n) {
  if (n < 1) throw ConfigError("unit_square: n must be >= 1");
  DomainSpec s;
  s.kind = DomainKind::unit_square;
  s.dim = 2;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      s.coarse_cells.push_back(Box{{double(i) / n, double(j) / n, 0.0}, {double(i + 1) / n, double(j + 1) / n, 0.0}});
  return s;
}

DomainSpec DomainSpec::unit_cube_scaled(int n, double scale) {
  if (n < 1 || !(scale > 0.0)) throw ConfigError("unit_cube_scaled: need n >= 1 and scale > 0");
  DomainSpec s;
  s.kind = DomainKind::unit_cube_scaled;
  s.dim = 3;
  const double h = scale / n;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        s.coarse_cells.push_back(Box{{i * h, j * h, k * h}, {(i + 1) * h, (j + 1) * h, (k + 1) * h}});
  return s;
}

DomainSpec DomainSpec::l_shape_3d() {
  DomainSpec s;
  s.kind = DomainKind::l_shape_3d;
  s.dim = 3;
  s.coarse_cells = {Box{{0.0, 0.0, 0.0}, {0.5, 0.5, 0.5}}, Box{{0.5, 0.0, 0.0}, {1.0, 0.5, 0.5}},
                    Box{{0.0, 0.5, 0.0}, {0.5, 1.0, 0.5}}};
  return s;
}

DomainSpec DomainSpec::custom_blocks(int dim, std::vector<Box> cells) {
  DomainSpec s;
  s.kind = DomainKind::custom_blocks;
  s.dim = dim;
  s.coarse_cells = std::move(cells);
  return s;
}

double MeshLevel::cell_measure(int c) const {
  double m = 1.0;
  for (int d = 0; d < dim; ++d) m *= cells[c].box.hi[d] - cells[c].box.lo[d];
  return m;
}

double MeshLevel::cell_diameter(int c) const {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double e = cells[c].box.hi[d] - cells[c].box.lo[d];
    s += e * e;
  }
  return std::sqrt(s);
}

std::array<int, 3> MeshLevel::lattice_size() const {
  std::array<int, 3> n{1, 1, 1};
  for (int d = 0; d < dim; ++d) n[d] = static_cast<int>(breakpoints[d].size()) - 1;
  return n;
}

int MeshLevel::find_cell(const std::array<int, 3>& idx) const {
  const auto n = lattice_size();
  for (int d = 0; d < 3; ++d)
    if (idx[d] < 0 || idx[d] >= n[d]) return -1;
  return cell_lookup[(static_cast<std::size_t>(idx[2]) * n[1] + idx[1]) * n[0] + idx[0]];
}

int MeshLevel::find_vertex(const std::array<int, 3>& idx) const {
  auto n = lattice_size();
  for (int d = 0; d < dim; ++d) n[d] += 1;
  for (int d = 0; d < 3; ++d)
    if (idx[d] < 0 || idx[d] >= n[d]) return -1;
  return vertex_lookup[(static_cast<std::size_t>(idx[2]) * n[1] + idx[1]) * n[0] + idx[0]];
}

void MeshLevel::finalize() {
  const auto n = lattice_size();
  cell_lookup.assign(static_cast<std::size_t>(n[0]) * n[1] * n[2], -1);
  for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
    const auto& idx = cells[c].index;
    auto& slot = cell_lookup[(static_cast<std::size_t>(idx[2]) * n[1] + idx[1]) * n[0] + idx[0]];
    if (slot >= 0)
      throw MeshError("overlapping cells " + std::to_string(slot) + " and " + std::to_string(c) + " at " +
                      point_str(cells[c].box.lo, dim));
    slot = c;
    for (int d = 0; d < dim; ++d) {
      cells[c].box.lo[d] = breakpoints[d][idx[d]];
      cells[c].box.hi[d] = breakpoints[d][idx[d] + 1];
    }
  }

  // Vertices in lexicographic lattice order (z slowest).
  std::array<int, 3> nv = n;
  for (int d = 0; d < dim; ++d) nv[d] += 1;
  const int nvc = n_vertices_per_cell();
  std::vector<char> used(static_cast<std::size_t>(nv[0]) * nv[1] * nv[2], 0);
  auto vflat = [&](const std::array<int, 3>& v) { return (static_cast<std::size_t>(v[2]) * nv[1] + v[1]) * nv[0] + v[0]; };
  auto corner = [&](const Cell& c, int j) {
    std::array<int, 3> v = c.index;
    for (int d = 0; d < dim; ++d) v[d] += (j >> d) & 1;
    return v;
  };
  for (const auto& c : cells)
    for (int j = 0; j < nvc; ++j) used[vflat(corner(c, j))] = 1;
  vertex_lookup.assign(used.size(), -1);
  vertices.clear();
  for (int k = 0; k < nv[2]; ++k)
    for (int j = 0; j < nv[1]; ++j)
      for (int i = 0; i < nv[0]; ++i) {
        const std::array<int, 3> v{i, j, k};
        if (!used[vflat(v)]) continue;
        vertex_lookup[vflat(v)] = static_cast<int>(vertices.size());
        Vertex vx;
        vx.index = v;
        for (int d = 0; d < dim; ++d) vx.x[d] = breakpoints[d][v[d]];
        vertices.push_back(vx);
      }
  for (auto& c : cells)
    for (int j = 0; j < nvc; ++j) c.vertices[j] = vertex_lookup[vflat(corner(c, j))];

  faces.clear();
  boundary_faces.clear();
  h = 0.0;
  for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
    h = std::max(h, cell_diameter(c));
    for (int axis = 0; axis < dim; ++axis) {
      for (int side : {-1, 1}) {
        std::array<int, 3> nb = cells[c].index;
        nb[axis] += side;
        const int other = find_cell(nb);
        if (other >= 0 && side < 0) continue;
        Face f;
        f.axis = axis;
        f.cell_plus = c;
        f.cell_minus = other;
        f.normal_sign = side;
        f.area = 1.0;
        const Box& b = cells[c].box;
        for (int d = 0; d < dim; ++d) {
          if (d == axis) {
            f.center[d] = side > 0 ? b.hi[d] : b.lo[d];
          } else {
            f.center[d] = 0.5 * (b.lo[d] + b.hi[d]);
            f.area *= b.hi[d] - b.lo[d];
          }
        }
        if (other < 0) boundary_faces.push_back(static_cast<int>(faces.size()));
        faces.push_back(f);
      }
    }
  }
}

namespace {

MeshLevel coarse_level(const DomainSpec& spec) {
  if (spec.dim != 2 && spec.dim != 3) throw ConfigError("domain dimension must be 2 or 3");
  if (spec.coarse_cells.empty()) throw ConfigError("domain has no coarse cells");
  MeshLevel m;
  m.level = 0;
  m.dim = spec.dim;
  for (int d = 0; d < spec.dim; ++d) {
    std::vector<double> bp;
    for (const auto& b : spec.coarse_cells) {
      if (!(b.hi[d] > b.lo[d])) throw ConfigError("coarse cell with non-positive extent along axis " + std::to_string(d));
      bp.push_back(b.lo[d]);
      bp.push_back(b.hi[d]);
    }
    std::sort(bp.begin(), bp.end());
    std::vector<double> uniq;
    for (double x : bp)
      if (uniq.empty() || !near(uniq.back(), x)) uniq.push_back(x);
    m.breakpoints[d] = uniq;
  }
  for (int d = spec.dim; d < 3; ++d) m.breakpoints[d] = {0.0, 0.0};

  auto locate = [](const std::vector<double>& bp, double x) {
    for (std::size_t i = 0; i < bp.size(); ++i)
      if (near(bp[i], x)) return static_cast<int>(i);
    return -1;
  };
  for (std::size_t ci = 0; ci < spec.coarse_cells.size(); ++ci) {
    const Box& b = spec.coarse_cells[ci];
    Cell c;
    for (int d = 0; d < spec.dim; ++d) {
      const int i0 = locate(m.breakpoints[d], b.lo[d]);
      const int i1 = locate(m.breakpoints[d], b.hi[d]);
      if (i1 != i0 + 1) {
        throw MeshError("coarse cell " + std::to_string(ci) + " " + point_str(b.lo, spec.dim) + "-" +
                        point_str(b.hi, spec.dim) + " is not face-conforming: breakpoint " +
                        std::to_string(m.breakpoints[d][i0 + 1]) + " of axis " + std::to_string(d) +
                        " lies inside it (hanging node on a neighbouring face)");
      }
      c.index[d] = i0;
    }
    m.cells.push_back(c);
  }
  std::sort(m.cells.begin(), m.cells.end(), [](const Cell& a, const Cell& b) { return lex_less(a.index, b.index); });
  m.finalize();
  return m;
}

MeshLevel refine(MeshLevel& coarse) {
  MeshLevel f;
  f.level = coarse.level + 1;
  f.dim = coarse.dim;
  for (int d = 0; d < 3; ++d) {
    if (d >= coarse.dim) {
      f.breakpoints[d] = coarse.breakpoints[d];
      continue;
    }
    const auto& bp = coarse.breakpoints[d];
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      f.breakpoints[d].push_back(bp[i]);
      f.breakpoints[d].push_back(0.5 * (bp[i] + bp[i + 1]));
    }
    f.breakpoints[d].push_back(bp.back());
  }
  const int nch = coarse.n_children();
  for (int c = 0; c < static_cast<int>(coarse.cells.size()); ++c)
    for (int j = 0; j < nch; ++j) {
      Cell child;
      for (int d = 0; d < coarse.dim; ++d) child.index[d] = 2 * coarse.cells[c].index[d] + ((j >> d) & 1);
      child.parent = c;
      f.cells.push_back(child);
    }
  std::sort(f.cells.begin(), f.cells.end(), [](const Cell& a, const Cell& b) { return lex_less(a.index, b.index); });
  for (int c = 0; c < static_cast<int>(f.cells.size()); ++c) {
    int j = 0;
    for (int d = 0; d < f.dim; ++d) j |= (f.cells[c].index[d] & 1) << d;
    coarse.cells[f.cells[c].parent].children[j] = c;
  }
  f.finalize();
  return f;
}

}  // namespace

MeshHierarchy build_hierarchy(const DomainSpec& spec, int L) {
  if (L < 0) throw ConfigError("number of refinements must be >= 0");
  MeshHierarchy H;
  H.spec = spec;
  H.levels.push_back(coarse_level(spec));
  for (int l = 1; l <= L; ++l) H.levels.push_back(refine(H.levels.back()));
  return H;
}

std::vector<Patch> collect_patches(const MeshLevel& level) {
  std::vector<Patch> patches(level.vertices.size());
  for (int v = 0; v < static_cast<int>(patches.size()); ++v) patches[v].center_vertex = v;
  const int nvc = level.n_vertices_per_cell();
  for (int c = 0; c < static_cast<int>(level.cells.size()); ++c)
    for (int j = 0; j < nvc; ++j) patches[level.cells[c].vertices[j]].cells.push_back(c);
  return patches;
}

std::vector<Patch> collect_cell_patches(const MeshLevel& level) {
  std::vector<Patch> patches(level.cells.size());
  for (int c = 0; c < static_cast<int>(patches.size()); ++c) patches[c].cells = {c};
  return patches;
}

BoundaryTags classify_boundary(const DomainSpec& spec, ProblemKind problem, const MeshLevel& level, const Face& face,
                               const CustomBoundaryRule& custom) {
  (void)level;
  if (!face.boundary()) throw Error("classify_boundary: face at " + point_str(face.center, spec.dim) + " is interior");
  switch (problem) {
    case ProblemKind::conv2d:
      return {UTag::dirichlet, PTag::dirichlet};
    case ProblemKind::custom:
      return {custom.u, custom.p};
    case ProblemKind::lshape3d: {
      if (spec.dim != 3) throw ConfigError("lshape3d boundary classification needs a 3D domain");
      const Point& c = face.center;
      if (face.axis == 1 && near(c[1], 1.0)) return {UTag::neumann, PTag::dirichlet};
      if (face.axis == 0 && near(c[0], 1.0)) return {UTag::neumann, PTag::neumann};
      return {UTag::directional, PTag::neumann};
    }
  }
  throw Error("classify_boundary: unknown problem kind");
}

std::vector<BoundaryTags> tag_boundary(const DomainSpec& spec, ProblemKind problem, const MeshLevel& level,
                                       const CustomBoundaryRule& custom) {
  std::vector<BoundaryTags> tags(level.faces.size());
  for (int f : level.boundary_faces) tags[f] = classify_boundary(spec, problem, level, level.faces[f], custom);
  return tags;
}

double face_length_scale(const MeshLevel& level, const Face& face, HfMode mode) {
  auto size = [&](int c) { return mode == HfMode::measure ? level.cell_measure(c) : level.cell_diameter(c); };
  if (face.boundary()) return size(face.cell_plus);
  return 0.5 * (size(face.cell_plus) + size(face.cell_minus));
}

bool on_measurement_face(const Face& face) {
  const Point& c = face.center;
  return face.boundary() && face.axis == 0 && face.normal_sign > 0 && near(c[0], 1.0) && c[1] < 0.5 && c[2] < 0.5;
}

void write_vtk_mesh(const MeshLevel& level, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  os.precision(17);
  os << "# vtk DataFile Version 3.0\nstbiot mesh level " << level.level << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << level.vertices.size() << " double\n";
  for (const auto& v : level.vertices) os << v.x[0] << ' ' << v.x[1] << ' ' << v.x[2] << '\n';
  const int nvc = level.n_vertices_per_cell();
  static constexpr int order[8] = {0, 1, 3, 2, 4, 5, 7, 6};
  os << "CELLS " << level.cells.size() << ' ' << level.cells.size() * (nvc + 1) << '\n';
  for (const auto& c : level.cells) {
    os << nvc;
    for (int j = 0; j < nvc; ++j) os << ' ' << c.vertices[order[j]];
    os << '\n';
  }
  os << "CELL_TYPES " << level.cells.size() << '\n';
  for (std::size_t c = 0; c < level.cells.size(); ++c) os << (level.dim == 2 ? 9 : 12) << '\n';
}

const char* to_string(UTag t) {
  switch (t) {
    case UTag::dirichlet: return "dirichlet";
    case UTag::neumann: return "neumann";
    case UTag::directional: return "directional";
  }
  return "?";
}

const char* to_string(PTag t) { return t == PTag::dirichlet ? "dirichlet" : "neumann"; }

const char* to_string(HfMode m) { return m == HfMode::measure ? "measure" : "diameter"; }

}  // namespace stbiot
