#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stbiot/driver.hpp"

namespace stbiot {

enum class ProblemSel { conv1, conv2, lshape3d, custom };
enum class RefineMode { both, tau };

const char* to_string(ProblemSel p);
const char* to_string(RefineMode m);

struct RunConfig {
  // [run]
  ProblemSel problem = ProblemSel::conv1;
  std::string name;

  // [discretization]
  int k = 2;
  int r = 3;
  Pair pair = Pair::qpdisc;
  Formulation formulation = Formulation::dsa;
  HfMode hf_mode = HfMode::measure;
  std::optional<double> gamma_a, gamma_b, gamma;

  // [mesh]  level l of a study uses base_refinements + l refinements of the coarse mesh.
  int coarse_cells = 1;
  int base_refinements = 2;
  int level_min = 0;
  int level_max = 2;
  RefineMode refine = RefineMode::both;
  int custom_dim = 2;
  std::vector<double> custom_blocks;  // lo..., hi... per block
  UTag custom_u = UTag::dirichlet;
  PTag custom_p = PTag::dirichlet;

  // [time]
  double tau0 = 0.1;
  std::optional<double> t_start;  // problem default when absent
  double t_final = 2.0;

  // [material]
  double rho = 1.0;
  double alpha = 0.9;
  double c0 = 0.01;
  std::optional<double> young, poisson;  // take precedence over lambda/mu when both given
  double lambda = 86.4;
  double mu = 37.0;
  double permeability = 1.0;  // K = permeability * I

  // [smoother]
  double omega = 0.7;
  int sweeps = 4;
  PatchKind patch = PatchKind::vertex;
  PatchSolverKind patch_solver = PatchSolverKind::time_diagonal;
  bool single_precision = false;

  // [solver]
  SolverKind solver = SolverKind::gmg;
  double tol = 1e-8;
  double tol_rel = 0.0;
  int max_iter = 100;
  int refine_steps = 0;
  int coarse_level = 0;
  int threads = 1;
  bool deterministic = true;

  // [output]
  std::string out_dir = "out";
  bool vtk = false;
  int vtk_every = 10;
  bool energy = false;
  int linf_samples = 100;

  double start_time() const;
  MaterialParams material() const;
  NitscheParams nitsche() const;
  SolverSetup solver_setup(double tau) const;
  DomainSpec domain() const;
  // Throws ConfigError.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& c);

// Parses "a..b" or "a" into a level range.
std::pair<int, int> parse_range(const std::string& s);

}  // namespace stbiot
