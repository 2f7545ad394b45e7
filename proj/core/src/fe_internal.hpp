#pragma once

// Geometry helpers shared by the assembly, norm and goal-quantity code.

#include <vector>

#include "stbiot/basis.hpp"
#include "stbiot/mesh.hpp"
#include "stbiot/quadrature.hpp"

namespace stbiot::detail {

struct CellGeom {
  Point center{0.0, 0.0, 0.0};
  Point hs{1.0, 1.0, 1.0};  // half edge lengths
  double jac = 1.0;         // volume Jacobian
};

inline CellGeom cell_geom(const MeshLevel& m, int c) {
  CellGeom g;
  const Box& b = m.cells[c].box;
  for (int d = 0; d < m.dim; ++d) {
    g.center[d] = 0.5 * (b.lo[d] + b.hi[d]);
    g.hs[d] = 0.5 * (b.hi[d] - b.lo[d]);
    g.jac *= g.hs[d];
  }
  return g;
}

inline Point to_physical(const CellGeom& g, const Point& xi, int dim) {
  Point x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d) x[d] = g.center[d] + g.hs[d] * xi[d];
  return x;
}

// Jacobian of the face parametrisation.
inline double face_jac(const CellGeom& g, int dim, int axis) {
  double j = 1.0;
  for (int d = 0; d < dim; ++d)
    if (d != axis) j *= g.hs[d];
  return j;
}

// Face rule embedded in cell reference coordinates at xi_axis = side.
inline std::vector<Point> face_points(const QuadratureRule& frule, int dim, int axis, double side) {
  std::vector<Point> pts(frule.size());
  for (std::size_t q = 0; q < frule.size(); ++q) {
    Point p{0.0, 0.0, 0.0};
    int j = 0;
    for (int d = 0; d < dim; ++d) p[d] = (d == axis) ? side : frule.points[q][j++];
    pts[q] = p;
  }
  return pts;
}

// Tables for all 2*dim faces, indexed [axis * 2 + (side > 0)].
struct FaceTables {
  QuadratureRule rule;
  std::vector<ElementTable> tab;
  const ElementTable& get(int axis, double side) const { return tab[axis * 2 + (side > 0 ? 1 : 0)]; }
};

inline FaceTables face_tables(const ScalarElement& el, int npts) {
  FaceTables ft;
  const int dim = el.dim();
  ft.rule = tensor_rule(gauss_legendre(npts), dim - 1);
  for (int axis = 0; axis < dim; ++axis)
    for (double side : {-1.0, 1.0}) ft.tab.push_back(tabulate(el, face_points(ft.rule, dim, axis, side)));
  return ft;
}

}  // namespace stbiot::detail
