#include <doctest.h>

#include "helpers.hpp"

using namespace stbiot;
using namespace stbiot::test;

namespace {

// Dense spatial blocks built directly from the form matrices.
void oracle_blocks(const FormMatrices& f, Formulation form, DenseMatrix& X, DenseMatrix& Y) {
  const int R = f.mass_v.rows(), S = f.mass_q.rows(), n = 2 * R + S;
  X = DenseMatrix::Zero(n, n);
  Y = DenseMatrix::Zero(n, n);
  const DenseMatrix M = DenseMatrix(f.mass_v), A = DenseMatrix(f.elasticity), C = DenseMatrix(f.coupling);
  X.block(0, 0, R, R) = -M;
  Y.block(0, R, R, R) = M;
  Y.block(R, 0, R, R) = M;
  X.block(R, R, R, R) = A;
  X.block(R, 2 * R, R, S) = C.transpose();
  X.block(2 * R, 2 * R, S, S) = DenseMatrix(f.pressure);
  Y.block(2 * R, 2 * R, S, S) = DenseMatrix(f.mass_q);
  if (form == Formulation::dsa)
    X.block(2 * R, 0, S, R) = -C;
  else
    Y.block(2 * R, R, S, R) = -C;
}

}  // namespace

TEST_SUITE("slab") {
  TEST_CASE("k=0 reduces to implicit Euler weights") {
    const TemporalWeights tw = temporal_weights(TimeBasis(0, 0.0, 0.2));
    CHECK(tw.w0(0, 0) == doctest::Approx(0.2));
    CHECK(tw.w1(0, 0) == doctest::Approx(1.0));
    CHECK(tw.left[0] == doctest::Approx(1.0));
  }

  TEST_CASE("block structure and dimension") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 1);
    const MeshLevel& m = h_m.finest();
    const Discretization d = make_disc(m, Pair::qpdisc, 2, 2);
    const FormMatrices f = d.assemble_forms();
    const TimeBasis tb(2, 0.5, 0.6);
    const TemporalWeights tw = temporal_weights(tb);
    for (Formulation form : {Formulation::dsa, Formulation::ds}) {
      const SlabOperator A = assemble_slab_matrix(f, tb, form);
      const int bs = d.dofs().block_size();
      CHECK(A.size() == 3 * bs);
      DenseMatrix X, Y;
      oracle_blocks(f, form, X, Y);
      const DenseMatrix full = DenseMatrix(A.assemble());
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const DenseMatrix expect = tw.w0(a, b) * X + tw.w1(a, b) * Y;
          CHECK((full.block(a * bs, b * bs, bs, bs) - expect).cwiseAbs().maxCoeff() <= 1e-12 * expect.cwiseAbs().maxCoeff());
        }
      const Vector x = random_vector(A.size(), 7);
      CHECK((A * x - full * x).norm() <= 1e-12 * (full * x).norm());
    }
  }

  TEST_CASE("patch submatrix equals extraction from the assembled matrix") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 1);
    const MeshLevel& m = h_m.finest();
    const Discretization d = make_disc(m, Pair::qq, 2, 1);
    const SlabOperator A = assemble_slab_matrix(d.assemble_forms(), TimeBasis(1, 0.0, 0.1), Formulation::dsa);
    const DenseMatrix full = DenseMatrix(A.assemble());
    const auto patches = collect_patches(m);
    const auto g = d.dofs().patch_global(d.dofs().patch_dofs(m, patches[4]));
    const DenseMatrix S = A.submatrix(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) CHECK(S(i, j) == full(g[i], g[j]));
  }

  TEST_CASE("extended residual agrees with the double residual") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 1);
    const Discretization d = make_disc(h_m.finest(), Pair::qpdisc, 2, 2);
    const SlabOperator A = assemble_slab_matrix(d.assemble_forms(), TimeBasis(2, 0.0, 0.1), Formulation::ds);
    const Vector x = random_vector(A.size(), 21), b = random_vector(A.size(), 22);
    const Vector r = b - A * x;
    CHECK((A.residual_extended(x, b) - r).norm() <= 1e-13 * r.norm());
    CHECK(A.residual_extended(x, A * x).norm() <= 1e-13 * (A * x).norm());
  }

  TEST_CASE("homogeneous data and zero history give a zero right-hand side") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 1);
    const MeshLevel& m = h_m.finest();
    const Discretization d = make_disc(m, Pair::qpdisc, 2, 1);
    const FormMatrices f = d.assemble_forms();
    const TraceState zero{0.0, Vector::Zero(d.dofs().R()), Vector::Zero(d.dofs().R()), Vector::Zero(d.dofs().S())};
    for (Formulation form : {Formulation::dsa, Formulation::ds})
      CHECK(assemble_slab_rhs(ProblemData{}, zero, d, f, TimeBasis(1, 0.0, 0.1), form).norm() == 0.0);
  }

  TEST_CASE("benchmark traction vanishes where sin(8 pi t) = 0") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::l_shape_3d(), 0);
    const MeshLevel& m = h_m[0];
    MaterialParams mat;
    mat.set_young(20000.0, 0.3);
    const Discretization d(m, tag_boundary(DomainSpec::l_shape_3d(), ProblemKind::lshape3d, m), Pair::qpdisc, 2, 0, mat,
                           NitscheParams::defaults(2));
    const FormMatrices f = d.assemble_forms();
    const TraceState zero{0.0, Vector::Zero(d.dofs().R()), Vector::Zero(d.dofs().R()), Vector::Zero(d.dofs().S())};
    // The single Radau node of (0, 0.125] is t = 0.125.
    const Vector b = assemble_slab_rhs(benchmark_data(), zero, d, f, TimeBasis(0, 0.0, 0.125), Formulation::dsa);
    CHECK(b.norm() < 1e-12 * 5e9);
    const Vector b2 = assemble_slab_rhs(benchmark_data(), zero, d, f, TimeBasis(0, 0.0, 0.0625), Formulation::dsa);
    CHECK(b2.segment(d.dofs().R(), d.dofs().R()).norm() > 1.0);
  }

  TEST_CASE("initial projection reproduces members of the space") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 1);
    const MeshLevel& m = h_m.finest();
    const Discretization d = make_disc(m, Pair::qpdisc, 2, 1);
    ProblemData data;
    data.u0 = [](const Point& x, double) { return Vec3{x[0] * x[0] * x[1], 1.0 - x[1] * x[1], 0.0}; };
    data.p0 = [](const Point& x, double) { return x[0] * x[1]; };
    const TraceState s = project_initial_data(data, d, 0.0);
    const auto& V = d.dofs().vspace();
    for (int i = 0; i < V.size(); ++i) {
      const Vec3 u = data.u0(V.node(i), 0.0);
      CHECK(s.u[2 * i] == doctest::Approx(u[0]).epsilon(1e-12));
      CHECK(s.u[2 * i + 1] == doctest::Approx(u[1]).epsilon(1e-12));
    }
    CHECK(s.v.norm() == 0.0);
    // Re-projecting through the mass matrix leaves p unchanged.
    const Vector p2 = d.project_scalar(data.p0, 0.0);
    CHECK((p2 - s.p).norm() < 1e-12);
  }

  TEST_CASE("L2 projection residual is orthogonal to the space") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 1);
    const MeshLevel& m = h_m.finest();
    const Discretization d = make_disc(m, Pair::qpdisc, 2, 1);
    const ManufacturedCase mc = make_conv1(conv_material());
    const VectorFn u0 = [&](const Point& x, double t) { return mc.solution.u(x, t); };
    const Vector uh = d.project_vector(u0, 1.0);
    // Oracle: cellwise Gauss quadrature of <u0 - u0h, psi> for random psi in V_h.
    const auto& V = d.dofs().vspace();
    const QuadratureRule rule = gauss_rule(6, 2);
    std::vector<double> phi(V.dofs_per_cell());
    for (unsigned seed = 1; seed <= 5; ++seed) {
      const Vector psi = random_vector(2 * V.size(), seed);
      double s = 0.0;
      for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
        const Box& b = m.cells[c].box;
        const double jac = 0.25 * (b.hi[0] - b.lo[0]) * (b.hi[1] - b.lo[1]);
        const int* nd = V.cell_dofs(c);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const Point& xi = rule.points[q];
          const Point x{map_to_interval(xi[0], b.lo[0], b.hi[0]), map_to_interval(xi[1], b.lo[1], b.hi[1]), 0.0};
          V.element().values(xi, phi.data());
          const Vec3 ue = u0(x, 1.0);
          for (int a = 0; a < 2; ++a) {
            double uh_a = 0.0, psi_a = 0.0;
            for (int i = 0; i < V.dofs_per_cell(); ++i) {
              uh_a += uh[nd[i] * 2 + a] * phi[i];
              psi_a += psi[nd[i] * 2 + a] * phi[i];
            }
            s += rule.weights[q] * jac * (ue[a] - uh_a) * psi_a;
          }
        }
      }
      CHECK(std::abs(s) < 1e-12);
    }
  }

  TEST_CASE("extract_blocks picks the Radau block") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 0);
    const MeshLevel& m = h_m[0];
    const DofMap d(m, Pair::qq, 2, 1);
    Vector X(d.size());
    for (int i = 0; i < d.size(); ++i) X[i] = i;
    const SlabBlocks b = extract_blocks(d, X, 1);
    CHECK(b.v[0] == d.index(Field::v, 1, 0));
    CHECK(b.u[3] == d.index(Field::u, 1, 3));
    CHECK(b.p[2] == d.index(Field::p, 1, 2));
  }
}
