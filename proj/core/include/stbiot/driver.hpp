#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "stbiot/forms.hpp"
#include "stbiot/krylov.hpp"
#include "stbiot/multigrid.hpp"
#include "stbiot/slab.hpp"

namespace stbiot {

enum class SolverKind { gmg, direct };

const char* to_string(SolverKind s);

struct SolverSetup {
  Pair pair = Pair::qpdisc;
  int r = 2;
  int k = 1;
  Formulation formulation = Formulation::dsa;
  MaterialParams material;
  NitscheParams nitsche;
  HfMode hf_mode = HfMode::measure;
  double tau = 0.01;
  SmootherParams smoother;
  FgmresOptions krylov;
  SolverKind solver = SolverKind::gmg;
  int coarse_level = 0;  // mesh level used as the multigrid coarse grid
  // Correction steps x += M(b - A x) after FGMRES, with the residual accumulated in long double.
  int refine_steps = 0;
};

struct SlabState {
  int n = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  Vector X;          // all Radau blocks
  TraceState trace;  // Radau block k+1, i.e. values at t_n
  SolveStats stats;
};

using TagFunction = std::function<std::vector<BoundaryTags>(const MeshLevel&)>;

// Per-level discretizations and the multigrid hierarchy, built once and reused for every slab.
class SpaceTimeSolver {
 public:
  SpaceTimeSolver(const MeshHierarchy& mesh, const TagFunction& tags, const SolverSetup& setup);

  const SolverSetup& setup() const { return setup_; }
  const Discretization& fine() const { return *discs_.back(); }
  const FormMatrices& fine_forms() const { return *forms_.back(); }
  const MgHierarchy& mg() const { return mg_; }
  const SlabOperator& slab_operator() const { return mg_.finest(); }
  double setup_ms() const { return setup_ms_; }

  TimeBasis time_basis_for(int n, double t0) const { return TimeBasis(setup_.k, t0 + (n - 1) * setup_.tau, t0 + n * setup_.tau); }
  SlabState solve_slab(const ProblemData& data, const TraceState& prev, int n, double t0) const;

  using Observer = std::function<void(const SlabState&)>;
  // Slabs 1..n_slabs starting from `initial` at initial.t; throws ConvergenceError.
  TraceState march(const ProblemData& data, const TraceState& initial, int n_slabs, const Observer& observer = {}) const;

 private:
  SolverSetup setup_;
  std::vector<std::unique_ptr<Discretization>> discs_;
  std::vector<std::unique_ptr<FormMatrices>> forms_;
  MgHierarchy mg_;
  double setup_ms_ = 0.0;
};

struct GoalValues {
  double b_u = 0.0;
  double b_p = 0.0;
};

// Integrals of u.n and p over the measurement faces x = 1, y < 0.5, z < 0.5.
GoalValues goal_quantities(const TraceState& state, const Discretization& disc);

// u^T A u + v^T M_V v + p^T M_Q p.
double discrete_energy(const TraceState& state, const FormMatrices& forms);

}  // namespace stbiot
