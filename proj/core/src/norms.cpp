#include "stbiot/norms.hpp"

#include <cmath>

#include "fe_internal.hpp"

namespace stbiot {

ErrorAccumulator::ErrorAccumulator(const Discretization& disc, const ManufacturedSolution& exact, int linf_samples,
                                   int time_points)
    : disc_(&disc), exact_(&exact), linf_samples_(linf_samples),
      time_points_(time_points > 0 ? time_points : disc.dofs().k() + 2) {
  const int dim = disc.dim();
  const QuadratureRule rule = gauss_rule(disc.dofs().r() + 2, dim);
  qp_.assign(rule.points.begin(), rule.points.end());
  qw_ = rule.weights;
  tv_ = tabulate(disc.dofs().vspace().element(), qp_);
  tq_ = tabulate(disc.dofs().qspace().element(), qp_);
}

FieldErrors ErrorAccumulator::squared_errors(const Vector& u, const Vector& v, const Vector& p, double t) const {
  const MeshLevel& m = disc_->mesh();
  const int dim = m.dim;
  const auto& V = disc_->dofs().vspace();
  const auto& Q = disc_->dofs().qspace();
  FieldErrors e;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    const auto g = detail::cell_geom(m, c);
    const int* nd = V.cell_dofs(c);
    const int* qd = Q.cell_dofs(c);
    for (int q = 0; q < tv_.nq; ++q) {
      const Point x = detail::to_physical(g, qp_[q], dim);
      const double w = qw_[q] * g.jac;
      Mat3 gu{};
      Vec3 vh{0.0, 0.0, 0.0};
      for (int i = 0; i < tv_.nb; ++i) {
        const double phi = tv_.value(q, i);
        for (int a = 0; a < dim; ++a) {
          const double ua = u[nd[i] * dim + a];
          vh[a] += v[nd[i] * dim + a] * phi;
          for (int b = 0; b < dim; ++b) gu[a][b] += ua * tv_.grad(q, i, b) / g.hs[b];
        }
      }
      double ph = 0.0;
      for (int s = 0; s < tq_.nb; ++s) ph += p[qd[s]] * tq_.value(q, s);
      const Mat3 ge = exact_->grad_u(x, t);
      const Vec3 ve = exact_->v(x, t);
      for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) e.grad_u += w * (ge[a][b] - gu[a][b]) * (ge[a][b] - gu[a][b]);
        e.v += w * (ve[a] - vh[a]) * (ve[a] - vh[a]);
      }
      const double dp = exact_->p(x, t) - ph;
      e.p += w * dp * dp;
    }
  }
  return e;
}

void ErrorAccumulator::add_slab(const TimeBasis& tb, const Vector& X) {
  const DofMap& dofs = disc_->dofs();
  const int n = tb.size();
  std::vector<SlabBlocks> blocks;
  for (int m = 0; m < n; ++m) blocks.push_back(extract_blocks(dofs, X, m));
  auto at = [&](double t) {
    SlabBlocks s{Vector::Zero(dofs.R()), Vector::Zero(dofs.R()), Vector::Zero(dofs.S())};
    for (int m = 0; m < n; ++m) {
      const double c = tb.value(m, t);
      s.u += c * blocks[m].u;
      s.v += c * blocks[m].v;
      s.p += c * blocks[m].p;
    }
    return s;
  };
  const Rule1D g = gauss_legendre(time_points_);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double t = map_to_interval(g.points[q], tb.t_start(), tb.t_end());
    const double w = 0.5 * tb.tau() * g.weights[q];
    const SlabBlocks s = at(t);
    const FieldErrors e = squared_errors(s.u, s.v, s.p, t);
    l2sq_.grad_u += w * e.grad_u;
    l2sq_.v += w * e.v;
    l2sq_.p += w * e.p;
  }
  auto take_max = [](FieldErrors& acc, const FieldErrors& e) {
    acc.grad_u = std::max(acc.grad_u, std::sqrt(e.grad_u));
    acc.v = std::max(acc.v, std::sqrt(e.v));
    acc.p = std::max(acc.p, std::sqrt(e.p));
  };
  if (linf_samples_ > 0) {
    const Rule1D s = gauss_legendre(linf_samples_);
    for (std::size_t q = 0; q < s.size(); ++q) {
      const double t = map_to_interval(s.points[q], tb.t_start(), tb.t_end());
      const SlabBlocks b = at(t);
      take_max(linf_, squared_errors(b.u, b.v, b.p, t));
    }
  }
  const auto& last = blocks.back();
  take_max(lnode_, squared_errors(last.u, last.v, last.p, tb.t_end()));
}

ErrorReport ErrorAccumulator::result() const {
  ErrorReport r;
  r.l2l2 = {std::sqrt(l2sq_.grad_u), std::sqrt(l2sq_.v), std::sqrt(l2sq_.p)};
  r.linf = linf_;
  r.lnode = lnode_;
  return r;
}

ErrorReport error_norms(const Discretization& disc, const ManufacturedSolution& exact,
                        const std::vector<std::pair<TimeBasis, Vector>>& trajectory, int linf_samples) {
  ErrorAccumulator acc(disc, exact, linf_samples);
  for (const auto& [tb, X] : trajectory) acc.add_slab(tb, X);
  return acc.result();
}

std::vector<std::optional<double>> compute_eoc(const std::vector<double>& e) {
  std::vector<std::optional<double>> out;
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (e[i - 1] > 0.0 && e[i] > 0.0)
      out.push_back(std::log2(e[i - 1] / e[i]));
    else
      out.push_back(std::nullopt);
  }
  return out;
}

}  // namespace stbiot
