#pragma once

#include <string>
#include <vector>

#include "stbiot/common.hpp"

namespace stbiot {

struct Box {
  Point lo{0.0, 0.0, 0.0};
  Point hi{0.0, 0.0, 0.0};
};

enum class DomainKind { unit_square, unit_cube_scaled, l_shape_3d, custom_blocks };

struct DomainSpec {
  DomainKind kind = DomainKind::unit_square;
  int dim = 2;
  std::vector<Box> coarse_cells;

  // [0,1]^2 split into n x n cells.
  static DomainSpec unit_square(int n = 1);
  // [0,scale]^3 split into n^3 cells.
  static DomainSpec unit_cube_scaled(int n = 1, double scale = 1.0);
  // ([0,1]^2 \ (0.5,1]^2) x [0,0.5] as three cubes of edge 0.5.
  static DomainSpec l_shape_3d();
  static DomainSpec custom_blocks(int dim, std::vector<Box> cells);
};

enum class HfMode { measure, diameter };

struct Cell {
  std::array<int, 3> index{0, 0, 0};  // lattice index of the lower corner
  Box box;
  std::array<int, 8> vertices{};      // lexicographic corners, x fastest
  int parent = -1;
  std::array<int, 8> children{};      // x fastest; only first 2^d used
};

struct Face {
  int axis = 0;        // normal direction
  int cell_plus = -1;  // cell whose outward normal is `normal`
  int cell_minus = -1; // -1 on the boundary
  double normal_sign = 1.0;
  Point center{0.0, 0.0, 0.0};
  double area = 0.0;   // (d-1)-measure
  bool boundary() const { return cell_minus < 0; }
  Vec3 normal() const {
    Vec3 n{0.0, 0.0, 0.0};
    n[axis] = normal_sign;
    return n;
  }
};

struct Vertex {
  std::array<int, 3> index{0, 0, 0};
  Point x{0.0, 0.0, 0.0};
};

struct Patch {
  int center_vertex = -1;
  std::vector<int> cells;
};

class MeshLevel {
 public:
  int level = 0;
  int dim = 2;
  std::array<std::vector<double>, 3> breakpoints;  // per-axis lattice coordinates
  std::vector<Cell> cells;
  std::vector<Vertex> vertices;
  std::vector<Face> faces;
  std::vector<int> boundary_faces;
  double h = 0.0;  // largest cell diameter

  int n_vertices_per_cell() const { return 1 << dim; }
  int n_children() const { return 1 << dim; }
  double cell_measure(int c) const;
  double cell_diameter(int c) const;
  // Cell containing lattice index, or -1.
  int find_cell(const std::array<int, 3>& idx) const;
  int find_vertex(const std::array<int, 3>& idx) const;
  std::array<int, 3> lattice_size() const;

  // Dense lattice -> id tables; rebuilt by finalize().
  std::vector<int> cell_lookup;
  std::vector<int> vertex_lookup;
  // Builds lookups, vertices, faces and h from breakpoints and cells.
  void finalize();
};

class MeshHierarchy {
 public:
  DomainSpec spec;
  std::vector<MeshLevel> levels;

  int n_levels() const { return static_cast<int>(levels.size()); }
  const MeshLevel& finest() const { return levels.back(); }
  const MeshLevel& operator[](int l) const { return levels[l]; }
};

MeshHierarchy build_hierarchy(const DomainSpec& spec, int L);

std::vector<Patch> collect_patches(const MeshLevel& level);
// Each cell as its own patch (experimental elementwise smoother).
std::vector<Patch> collect_cell_patches(const MeshLevel& level);

enum class UTag { dirichlet, neumann, directional };
enum class PTag { dirichlet, neumann };

struct BoundaryTags {
  UTag u = UTag::dirichlet;
  PTag p = PTag::dirichlet;
};

enum class ProblemKind { conv2d, lshape3d, custom };

// Boundary-tag rule for custom problems: evaluated on the face center and outward normal.
struct CustomBoundaryRule {
  UTag u = UTag::dirichlet;
  PTag p = PTag::dirichlet;
};

BoundaryTags classify_boundary(const DomainSpec& spec, ProblemKind problem, const MeshLevel& level, const Face& face,
                               const CustomBoundaryRule& custom = {});
// Tags for all faces (interior faces get default-constructed entries).
std::vector<BoundaryTags> tag_boundary(const DomainSpec& spec, ProblemKind problem, const MeshLevel& level,
                                       const CustomBoundaryRule& custom = {});

double face_length_scale(const MeshLevel& level, const Face& face, HfMode mode = HfMode::measure);

// Legacy VTK unstructured grid of the cells.
void write_vtk_mesh(const MeshLevel& level, const std::string& path);

// Measurement surface of the L-shape benchmark: x = 1, y in (0,0.5), z in (0,0.5).
bool on_measurement_face(const Face& face);

const char* to_string(UTag t);
const char* to_string(PTag t);
const char* to_string(HfMode m);

}  // namespace stbiot
