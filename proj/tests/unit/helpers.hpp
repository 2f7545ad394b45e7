#pragma once

#include <random>

#include "stbiot/driver.hpp"
#include "stbiot/experiments.hpp"

namespace stbiot::test {

inline MaterialParams conv_material() {
  MaterialParams m;
  m.set_young(100.0, 0.35);
  return m;
}

inline std::vector<BoundaryTags> conv_tags(const MeshLevel& level) {
  return tag_boundary(DomainSpec::unit_square(1), ProblemKind::conv2d, level);
}

inline Discretization make_disc(const MeshLevel& level, Pair pair, int r, int k,
                                const MaterialParams& m = conv_material()) {
  return Discretization(level, conv_tags(level), pair, r, k, m, NitscheParams::defaults(r));
}

inline Vector random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace stbiot::test
