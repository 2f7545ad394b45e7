// Command line front end: `solve` runs a configured study, `perf` evaluates the productivity model.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>

#include "stbiot/energy_meter.hpp"
#include "stbiot/experiments.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, not_converged = 2 };

struct SolveOptions {
  std::string config;
  std::string refinements;
  std::optional<int> k, r;
  std::string pair, formulation;
  std::optional<double> tol, tol_rel, t_final;
  std::optional<int> threads;
  bool deterministic = false;
  bool vtk = false;
  bool energy = false;
  bool quiet = false;
  std::string out;
};

template <class E>
E parse_enum(const std::string& s, std::initializer_list<E> values, const char* what) {
  for (E e : values)
    if (s == stbiot::to_string(e)) return e;
  throw stbiot::ConfigError(std::string("invalid ") + what + " '" + s + "'");
}

stbiot::RunConfig build_config(const SolveOptions& o) {
  using namespace stbiot;
  RunConfig c = load_config(o.config);
  if (!o.refinements.empty()) std::tie(c.level_min, c.level_max) = parse_range(o.refinements);
  if (o.k) c.k = *o.k;
  if (o.r) c.r = *o.r;
  if (!o.pair.empty()) c.pair = parse_enum(o.pair, {Pair::qq, Pair::qpdisc}, "pair");
  if (!o.formulation.empty())
    c.formulation = parse_enum(o.formulation, {Formulation::dsa, Formulation::ds}, "formulation");
  if (o.tol) c.tol = *o.tol;
  if (o.tol_rel) c.tol_rel = *o.tol_rel;
  if (o.t_final) c.t_final = *o.t_final;
  if (o.threads) c.threads = *o.threads;
  if (o.deterministic) c.deterministic = true;
  if (o.vtk) c.vtk = true;
  if (o.energy) c.energy = true;
  if (!o.out.empty()) c.out_dir = o.out;
  c.validate();
  return c;
}

int run_solve(const SolveOptions& o) {
  using namespace stbiot;
  const RunConfig c = build_config(o);
  std::filesystem::create_directories(c.out_dir);
  {
    std::ofstream f(c.out_dir + "/config.toml");
    f << serialize_config(c);
  }
  const RunLog log{o.quiet ? nullptr : &std::cout};
  EnergyMeter meter;
  if (c.energy && !meter.available()) log("energy counters unavailable; E is left empty");
  meter.start();
  const auto start = std::chrono::steady_clock::now();

  int status = ok;
  if (c.problem == ProblemSel::lshape3d) {
    const BenchmarkResult r = run_benchmark(c, log);
    write_goal_csv(r, c.out_dir + "/goal.csv");
    write_solver_csv(r.slabs, c.out_dir + "/solver.csv");
    write_benchmark_summary(r, c.out_dir + "/summary.csv");
    log("b_u in [" + std::to_string(r.min_bu()) + ", " + std::to_string(r.max_bu()) + "], b_p in [" +
        std::to_string(r.min_bp()) + ", " + std::to_string(r.max_bp()) + "], mean iterations " +
        std::to_string(r.mean_iterations()));
    if (r.failed_slab >= 0) status = not_converged;
  } else if (c.problem == ProblemSel::custom) {
    throw ConfigError("problem 'custom' has no study driver in the command line tool");
  } else {
    const ConvergenceResult r = run_convergence(c, log);
    write_convergence_csv(r, c.out_dir + "/convergence.csv");
  }

  if (c.energy) {
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const PerfReport p = perf_model({c.threads}, {t}, {meter.stop()});
    write_productivity_csv(p, c.out_dir + "/productivity.csv");
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time finite element solver for the dynamic Biot system"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Run a convergence study or the L-shape benchmark");
  solve->add_option("--config", so.config, "Run configuration file")->required();
  solve->add_option("--refinements", so.refinements, "Level range a..b");
  solve->add_option("--k", so.k, "Polynomial degree in time");
  solve->add_option("--r", so.r, "Polynomial degree of the displacement space");
  solve->add_option("--pair", so.pair, "Spatial pair")->check(CLI::IsMember({"qq", "qpdisc"}));
  solve->add_option("--formulation", so.formulation, "Discrete problem")->check(CLI::IsMember({"dsa", "ds"}));
  solve->add_option("--tol", so.tol, "Absolute FGMRES tolerance");
  solve->add_option("--tol-rel", so.tol_rel, "Relative FGMRES tolerance");
  solve->add_option("--threads", so.threads, "Smoother threads");
  solve->add_flag("--deterministic", so.deterministic, "Merge patch updates in fixed order");
  solve->add_flag("--vtk", so.vtk, "Write VTK fields");
  solve->add_flag("--energy", so.energy, "Read powercap counters and write productivity.csv");
  solve->add_option("--t-final", so.t_final, "Override the end time");
  solve->add_option("--out", so.out, "Output directory");
  solve->add_flag("--quiet", so.quiet, "No progress output");

  std::string perf_in, perf_out = "productivity.csv";
  auto* perf = app.add_subcommand("perf", "Speedup, energy ratio and productivity from measurements");
  perf->add_option("--in", perf_in, "CSV with columns n, t_wall and optionally E")->required();
  perf->add_option("--out", perf_out, "Output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : config_error;
  }

  try {
    if (*solve) return run_solve(so);
    const stbiot::PerfReport r = stbiot::run_perf(perf_in, perf_out);
    for (const auto& row : r.rows)
      std::cout << row.n << ": S " << row.S << (row.P ? ", R " + std::to_string(*row.R) + ", P " + std::to_string(*row.P) : "")
                << '\n';
    return ok;
  } catch (const stbiot::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const stbiot::ConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return not_converged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return config_error;
  }
}
