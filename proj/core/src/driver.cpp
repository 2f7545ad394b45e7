#include "stbiot/driver.hpp"

#include <chrono>

#include "fe_internal.hpp"

namespace stbiot {

const char* to_string(SolverKind s) { return s == SolverKind::gmg ? "gmg" : "direct"; }

SpaceTimeSolver::SpaceTimeSolver(const MeshHierarchy& mesh, const TagFunction& tags, const SolverSetup& setup)
    : setup_(setup) {
  const auto start = std::chrono::steady_clock::now();
  if (!(setup.tau > 0.0)) throw ConfigError("time step must be positive");
  if (setup.coarse_level < 0 || setup.coarse_level >= mesh.n_levels())
    throw ConfigError("coarse level " + std::to_string(setup.coarse_level) + " outside the mesh hierarchy");
  const int first = setup.solver == SolverKind::direct ? mesh.n_levels() - 1 : setup.coarse_level;
  for (int l = first; l < mesh.n_levels(); ++l) {
    discs_.push_back(std::make_unique<Discretization>(mesh[l], tags(mesh[l]), setup.pair, setup.r, setup.k,
                                                      setup.material, setup.nitsche, setup.hf_mode));
    forms_.push_back(std::make_unique<FormMatrices>(discs_.back()->assemble_forms()));
  }
  std::vector<const Discretization*> d;
  std::vector<const FormMatrices*> f;
  for (std::size_t i = 0; i < discs_.size(); ++i) {
    d.push_back(discs_[i].get());
    f.push_back(forms_[i].get());
  }
  const TimeBasis tb(setup.k, 0.0, setup.tau);
  mg_ = build_hierarchy_for_slab(mesh, d, f, tb, setup.formulation, setup.smoother);
  setup_ms_ = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

SlabState SpaceTimeSolver::solve_slab(const ProblemData& data, const TraceState& prev, int n, double t0) const {
  SlabState s;
  s.n = n;
  const TimeBasis tb = time_basis_for(n, t0);
  s.t_start = tb.t_start();
  s.t_end = tb.t_end();
  const Vector b = assemble_slab_rhs(data, prev, fine(), fine_forms(), tb, setup_.formulation);
  s.X = Vector::Zero(b.size());
  mg_.reset_timers();
  s.stats = fgmres(mg_.finest(), b, s.X, [this](const Vector& r) { return mg_.apply(r); }, setup_.krylov);
  s.stats.smoother_ms = mg_.smoother_ms();
  if (setup_.refine_steps > 0 && s.stats.converged) {
    Vector r;
    for (int i = 0; i < setup_.refine_steps; ++i) {
      r = mg_.finest().residual_extended(s.X, b);
      s.X += mg_.apply(r);
    }
    s.stats.residual = mg_.finest().residual_extended(s.X, b).norm();
  }
  const SlabBlocks last = extract_blocks(fine().dofs(), s.X, setup_.k);
  s.trace = TraceState{s.t_end, last.u, last.v, last.p};
  return s;
}

TraceState SpaceTimeSolver::march(const ProblemData& data, const TraceState& initial, int n_slabs,
                                  const Observer& observer) const {
  TraceState prev = initial;
  const double t0 = initial.t;
  for (int n = 1; n <= n_slabs; ++n) {
    SlabState s = solve_slab(data, prev, n, t0);
    if (!s.stats.converged)
      throw ConvergenceError("FGMRES did not converge on slab " + std::to_string(n) + " (" +
                                 std::to_string(s.stats.iterations) + " iterations, residual " +
                                 std::to_string(s.stats.residual) + ")",
                             n, s.stats.iterations, s.stats.residual);
    if (observer) observer(s);
    prev = std::move(s.trace);
  }
  return prev;
}

GoalValues goal_quantities(const TraceState& state, const Discretization& disc) {
  const MeshLevel& m = disc.mesh();
  const int dim = m.dim;
  const auto& V = disc.dofs().vspace();
  const auto& Q = disc.dofs().qspace();
  const auto fv = detail::face_tables(V.element(), disc.dofs().r() + 2);
  const auto fq = detail::face_tables(Q.element(), disc.dofs().r() + 2);
  GoalValues out;
  bool any = false;
  for (int f : m.boundary_faces) {
    const Face& face = m.faces[f];
    if (!on_measurement_face(face)) continue;
    any = true;
    const auto g = detail::cell_geom(m, face.cell_plus);
    const double fj = detail::face_jac(g, dim, face.axis);
    const auto& tv = fv.get(face.axis, face.normal_sign);
    const auto& tq = fq.get(face.axis, face.normal_sign);
    const Vec3 n = face.normal();
    const int* nd = V.cell_dofs(face.cell_plus);
    const int* qd = Q.cell_dofs(face.cell_plus);
    for (std::size_t q = 0; q < fv.rule.size(); ++q) {
      const double w = fv.rule.weights[q] * fj;
      double un = 0.0, p = 0.0;
      for (int i = 0; i < tv.nb; ++i)
        for (int a = 0; a < dim; ++a) un += state.u[nd[i] * dim + a] * n[a] * tv.value(q, i);
      for (int s = 0; s < tq.nb; ++s) p += state.p[qd[s]] * tq.value(q, s);
      out.b_u += w * un;
      out.b_p += w * p;
    }
  }
  if (!any) throw Error("goal_quantities: the mesh has no faces on the measurement surface");
  return out;
}

double discrete_energy(const TraceState& s, const FormMatrices& f) {
  return s.u.dot(f.elasticity * s.u) + s.v.dot(f.mass_v * s.v) + s.p.dot(f.mass_q * s.p);
}

}  // namespace stbiot
