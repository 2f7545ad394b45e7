#include <doctest.h>

#include <algorithm>
#include <set>

#include "stbiot/dof_map.hpp"

using namespace stbiot;

TEST_SUITE("dof_map") {
  TEST_CASE("l-shape ref0 Q2/P1disc has 390 unknowns per Radau point") {
    // Oracle: Q2 nodes sit on the lattice of spacing 0.25 minus the open removed quarter.
    int nodes = 0;
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; j <= 4; ++j)
        for (int l = 0; l <= 2; ++l) nodes += !(i > 2 && j > 2);
    const int oracle = 2 * 3 * nodes + 3 * 4;
    CHECK(oracle == 390);
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::l_shape_3d(), 0);
    const MeshLevel& m = h_m[0];
    const DofMap d(m, Pair::qpdisc, 2, 1);
    CHECK(d.block_size() == oracle);
    CHECK(d.size() == 2 * 390);
  }

  TEST_CASE("single cell Q2/Q1") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 0);
    const MeshLevel& m = h_m[0];
    const DofMap d(m, Pair::qq, 2, 0);
    CHECK(d.R() == 18);
    CHECK(d.S() == 4);
    CHECK(d.size() == 40);
  }

  TEST_CASE("2x2 Q2/P1disc pressure count") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(2), 0);
    const MeshLevel& m = h_m[0];
    const DofMap d(m, Pair::qpdisc, 2, 1);
    CHECK(d.S() == 12);
    CHECK(d.R() == 2 * 25);
  }

  TEST_CASE("layout is Radau-major with blocks V, U, P") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 1);
    const MeshLevel& m = h_m.finest();
    const DofMap d(m, Pair::qpdisc, 2, 2);
    CHECK(d.size() == 3 * (2 * d.R() + d.S()));
    int expect = 0;
    for (int mm = 0; mm < 3; ++mm)
      for (Field f : {Field::v, Field::u, Field::p}) {
        const int n = f == Field::p ? d.S() : d.R();
        for (int s = 0; s < n; ++s) {
          REQUIRE(d.index(f, mm, s) == expect);
          const DofInfo info = d.decode(expect);
          CHECK(info.field == f);
          CHECK(info.radau == mm);
          CHECK(info.spatial == s);
          ++expect;
        }
      }
    CHECK_THROWS_AS(d.decode(d.size()), Error);
  }

  TEST_CASE("patch DoFs: cell DoFs, injective, covering") {
    for (Pair pair : {Pair::qq, Pair::qpdisc}) {
      const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 2);
      const MeshLevel& m = h_m.finest();
      const DofMap d(m, pair, 2, 1);
      std::vector<int> covered(d.size(), 0);
      std::vector<int> cd;
      for (const Patch& p : collect_patches(m)) {
        const PatchDofs pd = d.patch_dofs(m, p);
        // Oracle: union of the cell DoFs of the patch cells.
        std::set<int> vec, scal;
        for (int c : p.cells) {
          d.cell_vector_dofs(c, cd);
          vec.insert(cd.begin(), cd.end());
          const int* q = d.qspace().cell_dofs(c);
          scal.insert(q, q + d.qspace().dofs_per_cell());
        }
        CHECK(pd.vec == std::vector<int>(vec.begin(), vec.end()));
        CHECK(pd.scal == std::vector<int>(scal.begin(), scal.end()));
        const auto g = d.patch_global(pd);
        CHECK(std::is_sorted(g.begin(), g.end()));
        CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
        CHECK(g.size() == static_cast<std::size_t>(d.n_radau() * pd.spatial_size()));
        for (int i : g) ++covered[i];
      }
      for (int c : covered) CHECK(c > 0);
    }
  }

  TEST_CASE("continuous nodes are shared across cells") {
    const MeshHierarchy h_m = build_hierarchy(DomainSpec::unit_square(1), 1);
    const MeshLevel& m = h_m.finest();
    const ScalarSpace q(m, ElementFamily::q_continuous, 3);
    CHECK(q.size() == 7 * 7);
    const ScalarSpace p(m, ElementFamily::p_discontinuous, 2);
    CHECK(p.size() == 4 * 6);
  }
}
