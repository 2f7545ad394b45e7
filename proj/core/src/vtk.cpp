#include "stbiot/vtk.hpp"

#include <fstream>

#include "fe_internal.hpp"

namespace stbiot {

void write_vtk_fields(const Discretization& disc, const TraceState& s, const std::string& path) {
  const MeshLevel& m = disc.mesh();
  const int dim = m.dim, nv = m.n_vertices_per_cell();
  const auto& V = disc.dofs().vspace();
  const auto& Q = disc.dofs().qspace();

  std::vector<Point> corners(nv);
  for (int i = 0; i < nv; ++i)
    for (int d = 0; d < dim; ++d) corners[i][d] = (i >> d) & 1 ? 1.0 : -1.0;
  const ElementTable tv = tabulate(V.element(), corners);
  const ElementTable tq = tabulate(Q.element(), corners);

  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  os.precision(12);
  const std::size_t nc = m.cells.size(), np = nc * nv;
  os << "# vtk DataFile Version 3.0\nstbiot fields t=" << s.t << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << np << " double\n";
  for (std::size_t c = 0; c < nc; ++c) {
    const auto g = detail::cell_geom(m, static_cast<int>(c));
    for (int i = 0; i < nv; ++i) {
      const Point x = detail::to_physical(g, corners[i], dim);
      os << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
    }
  }
  // VTK corner order differs from the lexicographic one in the second pair of each face.
  static const int quad[4] = {0, 1, 3, 2};
  static const int hex[8] = {0, 1, 3, 2, 4, 5, 7, 6};
  os << "CELLS " << nc << ' ' << nc * (nv + 1) << '\n';
  for (std::size_t c = 0; c < nc; ++c) {
    os << nv;
    for (int i = 0; i < nv; ++i) os << ' ' << c * nv + (dim == 2 ? quad[i] : hex[i]);
    os << '\n';
  }
  os << "CELL_TYPES " << nc << '\n';
  for (std::size_t c = 0; c < nc; ++c) os << (dim == 2 ? 9 : 12) << '\n';

  os << "POINT_DATA " << np << "\nVECTORS u double\n";
  for (std::size_t c = 0; c < nc; ++c) {
    const int* nd = V.cell_dofs(static_cast<int>(c));
    for (int q = 0; q < nv; ++q) {
      double u[3] = {0.0, 0.0, 0.0};
      for (int i = 0; i < tv.nb; ++i)
        for (int a = 0; a < dim; ++a) u[a] += s.u[nd[i] * dim + a] * tv.value(q, i);
      os << u[0] << ' ' << u[1] << ' ' << u[2] << '\n';
    }
  }
  os << "SCALARS p double 1\nLOOKUP_TABLE default\n";
  for (std::size_t c = 0; c < nc; ++c) {
    const int* qd = Q.cell_dofs(static_cast<int>(c));
    for (int q = 0; q < nv; ++q) {
      double p = 0.0;
      for (int i = 0; i < tq.nb; ++i) p += s.p[qd[i]] * tq.value(q, i);
      os << p << '\n';
    }
  }
}

}  // namespace stbiot
