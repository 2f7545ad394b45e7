#include <doctest.h>

#include "helpers.hpp"

using namespace stbiot;
using namespace stbiot::test;

TEST_SUITE("norms") {
  TEST_CASE("EOC") {
    const auto e = compute_eoc({8.0, 1.0});
    REQUIRE(e.size() == 1);
    CHECK(*e[0] == doctest::Approx(3.0));
    CHECK(*compute_eoc({0.5, 0.5})[0] == doctest::Approx(0.0));
    CHECK(std::round(*compute_eoc({1.2544218392e-02, 1.5227995262e-03})[0] * 100) / 100 == doctest::Approx(3.04));
    CHECK_FALSE(compute_eoc({1.0, 0.0})[0].has_value());
    CHECK(compute_eoc({1.0}).empty());
  }

  TEST_CASE("a discrete solution equal to the exact one has zero error") {
    // u in Q2, p affine in space, both linear in time: representable with k = 1, Q2/P1disc.
    const MaterialParams m = conv_material();
    const SeparableField ux({{1.0, jet_poly({0.5, 1.0}), {jet_poly({0, 1, 1}), jet_poly({1, 0, -1}), jet_one()}}});
    const SeparableField uy({{2.0, jet_poly({0.0, 1.0}), {jet_poly({1, 1}), jet_poly({0, 2}), jet_one()}}});
    const SeparableField p({{1.0, jet_poly({1.0, -1.0}), {jet_poly({0, 1}), jet_one(), jet_one()}},
                            {0.5, jet_poly({0.0, 2.0}), {jet_one(), jet_poly({0, 1}), jet_one()}}});
    const ManufacturedSolution s(2, {ux, uy, SeparableField{}}, p, m);
    const MeshHierarchy h_mesh = build_hierarchy(DomainSpec::unit_square(1), 1);
    const MeshLevel& mesh = h_mesh.finest();
    const Discretization d = make_disc(mesh, Pair::qpdisc, 2, 1);
    const DofMap& dofs = d.dofs();
    const TimeBasis tb(1, 0.2, 0.3);
    Vector X(dofs.size());
    for (int a = 0; a < 2; ++a) {
      const double t = tb.node(a);
      X.segment(dofs.index(Field::v, a, 0), dofs.R()) = d.project_vector([&](const Point& x, double tt) { return s.v(x, tt); }, t);
      X.segment(dofs.index(Field::u, a, 0), dofs.R()) = d.project_vector([&](const Point& x, double tt) { return s.u(x, tt); }, t);
      X.segment(dofs.index(Field::p, a, 0), dofs.S()) = d.project_scalar([&](const Point& x, double tt) { return s.p(x, tt); }, t);
    }
    ErrorAccumulator acc(d, s, 7);
    acc.add_slab(tb, X);
    const ErrorReport r = acc.result();
    for (const FieldErrors& e : {r.l2l2, r.linf, r.lnode}) {
      CHECK(e.grad_u < 1e-12);
      CHECK(e.v < 1e-12);
      CHECK(e.p < 1e-12);
    }
  }

  TEST_CASE("norm families on a constant-in-time error") {
    // A zero discrete solution measures the exact fields themselves.
    const MaterialParams m = conv_material();
    const SeparableField one({{1.0, jet_one(), {jet_one(), jet_one(), jet_one()}}});
    const ManufacturedSolution s(2, {SeparableField{}, SeparableField{}, SeparableField{}}, one, m);
    const MeshHierarchy h_mesh = build_hierarchy(DomainSpec::unit_square(1), 0);
    const MeshLevel& mesh = h_mesh[0];
    const Discretization d = make_disc(mesh, Pair::qq, 2, 0);
    ErrorAccumulator acc(d, s, 5);
    for (int n = 0; n < 4; ++n) acc.add_slab(TimeBasis(0, 0.25 * n, 0.25 * (n + 1)), Vector::Zero(d.dofs().size()));
    const ErrorReport r = acc.result();
    CHECK(r.l2l2.p == doctest::Approx(1.0));
    CHECK(r.linf.p == doctest::Approx(1.0));
    CHECK(r.lnode.p == doctest::Approx(1.0));
    CHECK(r.l2l2.grad_u == 0.0);
  }
}
