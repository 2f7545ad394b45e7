#include <doctest.h>

#include "helpers.hpp"
#include "stbiot/diagnostics.hpp"

using namespace stbiot;
using namespace stbiot::test;

namespace {

std::vector<BoundaryTags> all_neumann(const MeshLevel& m) {
  return tag_boundary(DomainSpec::unit_square(1), ProblemKind::custom, m, {UTag::neumann, PTag::neumann});
}

bool spd(const SparseMatrix& M) {
  const Eigen::LLT<DenseMatrix> llt{DenseMatrix(M)};
  return llt.info() == Eigen::Success;
}

}  // namespace

TEST_SUITE("forms") {
  TEST_CASE("symmetry and definiteness at default penalties") {
    const MeshHierarchy h = build_hierarchy(DomainSpec::unit_square(1), 1);
    for (Pair pair : {Pair::qq, Pair::qpdisc})
      for (int r : {2, 3}) {
        const Discretization d = make_disc(h.finest(), pair, r, 1);
        const FormMatrices f = d.assemble_forms();
        CHECK(symmetry_defect(f.elasticity) <= 1e-12);
        CHECK(symmetry_defect(f.pressure) <= 1e-12);
        CHECK(symmetry_defect(f.mass_v) <= 1e-12);
        CHECK(symmetry_defect(f.mass_q) <= 1e-12);
        CHECK(spd(f.mass_v));
        CHECK(spd(f.mass_q));
        const CoercivityReport c = coercivity_diagnostic(f);
        CHECK(c.lambda_min_A > 0.0);
        CHECK(c.lambda_min_B > 0.0);
        CHECK(f.coupling.rows() == d.dofs().S());
        CHECK(f.coupling.cols() == d.dofs().R());
      }
  }

  TEST_CASE("3D forms are symmetric") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::l_shape_3d(), 0);
    const MeshLevel& m = h_m[0];
    MaterialParams mat;
    mat.set_young(20000.0, 0.3);
    const Discretization d(m, tag_boundary(DomainSpec::l_shape_3d(), ProblemKind::lshape3d, m), Pair::qpdisc, 2, 1, mat,
                           NitscheParams::defaults(2));
    const FormMatrices f = d.assemble_forms();
    CHECK(symmetry_defect(f.elasticity) <= 1e-12);
    CHECK(symmetry_defect(f.pressure) <= 1e-12);
    const CoercivityReport c = coercivity_diagnostic(f);
    CHECK(c.lambda_min_A > 0.0);
    CHECK(c.lambda_min_B > 0.0);
  }

  TEST_CASE("removing the Nitsche penalty is reported, not rejected") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(2), 0);
    const MeshLevel& m = h_m[0];
    NitscheParams nit = NitscheParams::defaults(2);
    nit.gamma_a = 0.0;
    const Discretization d(m, conv_tags(m), Pair::qpdisc, 2, 1, conv_material(), nit);
    CoercivityReport c;
    CHECK_NOTHROW(c = coercivity_diagnostic(d.assemble_forms()));
    CHECK(std::isfinite(c.lambda_min_A));
  }

  TEST_CASE("Q1 pressure without Dirichlet faces is the plain stiffness matrix") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 0);
    const MeshLevel& m = h_m[0];
    const Discretization d(m, all_neumann(m), Pair::qq, 2, 0, conv_material(), NitscheParams::defaults(2));
    const DenseMatrix B = DenseMatrix(d.assemble_forms().pressure);
    REQUIRE(B.rows() == 4);
    const auto& Q = d.dofs().qspace();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Point& a = Q.node(i);
        const Point& b = Q.node(j);
        const int shared = (a[0] == b[0]) + (a[1] == b[1]);
        const double expect = i == j ? 2.0 / 3.0 : (shared == 1 ? -1.0 / 6.0 : -1.0 / 3.0);
        CHECK(B(i, j) == doctest::Approx(expect).epsilon(1e-13));
      }
  }

  TEST_CASE("SIP form is consistent for affine pressures") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(2), 0);
    const MeshLevel& m = h_m[0];
    const Discretization d(m, all_neumann(m), Pair::qpdisc, 2, 0, conv_material(), NitscheParams::defaults(2));
    const SparseMatrix B = d.assemble_forms().pressure;
    // Jumps vanish, so the form reduces to the volume integral of grad p . grad q.
    const Vector p = d.project_scalar([](const Point& x, double) { return 2.0 * x[0] - 3.0 * x[1] + 0.5; }, 0.0);
    const Vector q = d.project_scalar([](const Point& x, double) { return -x[0] + 4.0 * x[1]; }, 0.0);
    CHECK(p.dot(B * p) == doctest::Approx(13.0).epsilon(1e-12));
    CHECK(q.dot(B * p) == doctest::Approx(-14.0).epsilon(1e-12));
  }

  TEST_CASE("homogeneous data gives zero functionals") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 1);
    const MeshLevel& m = h_m.finest();
    const Discretization d = make_disc(m, Pair::qpdisc, 2, 1);
    Vector F, G;
    d.functionals(ProblemData{}, 0.3, F, G);
    CHECK(F.size() == d.dofs().R());
    CHECK(G.size() == d.dofs().S());
    CHECK(F.norm() == 0.0);
    CHECK(G.norm() == 0.0);
  }

  TEST_CASE("inf-sup constant stays bounded under refinement") {
    // Oracle: dense computation on two meshes.
    for (Pair pair : {Pair::qq, Pair::qpdisc}) {
      const MeshHierarchy h = build_hierarchy(DomainSpec::unit_square(2), 1);
      const double coarse = estimate_inf_sup(h[0], pair, 2);
      const double fine = estimate_inf_sup(h[1], pair, 2);
      CHECK(coarse > 0.0);
      CHECK(fine >= 0.5 * coarse);
    }
  }

  TEST_CASE("material validation") {
    MaterialParams m;
    CHECK_NOTHROW(m.validate(2));
    m.c0 = 0.0;
    CHECK_THROWS_AS(m.validate(2), ConfigError);
    m = MaterialParams{};
    m.K[0][1] = 2.0;
    CHECK_THROWS_AS(m.validate(2), ConfigError);
    const auto [lambda, mu] = MaterialParams::lame_from_young(100.0, 0.35);
    CHECK(lambda == doctest::Approx(86.42).epsilon(1e-3));
    CHECK(mu == doctest::Approx(37.04).epsilon(1e-3));
  }

  TEST_CASE("default penalties") {
    const NitscheParams p = NitscheParams::defaults(3);
    CHECK(p.gamma_a == doctest::Approx(6e5));
    CHECK(p.gamma_b == doctest::Approx(3.0));
    CHECK(p.gamma == doctest::Approx(3.0));
  }
}
