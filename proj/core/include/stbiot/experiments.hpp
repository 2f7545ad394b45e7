#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stbiot/config.hpp"
#include "stbiot/norms.hpp"
#include "stbiot/perf.hpp"

namespace stbiot {

// Lines of progress output; null silences it.
struct RunLog {
  std::ostream* os = nullptr;
  void operator()(const std::string& line) const;
};

ProblemData benchmark_data();
ManufacturedCase manufactured_case(const RunConfig& c);
// Boundary tags for the configured problem.
TagFunction tag_function(const RunConfig& c);

struct ConvergenceRow {
  int level = 0;
  double tau = 0.0;
  double h = 0.0;
  int dofs_per_slab = 0;
  int slabs = 0;
  double mean_iterations = 0.0;
  double wall_s = 0.0;
  ErrorReport errors;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
};

// Levels level_min..level_max; tau halves each level, h halves too in refine = both.
ConvergenceResult run_convergence(const RunConfig& c, const RunLog& log = {});

struct SlabRecord {
  int slab = 0;
  double t = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double wall_ms = 0.0;
  double b_u = 0.0;
  double b_p = 0.0;
  double energy = 0.0;
};

struct BenchmarkResult {
  int level = 0;
  int dofs_per_slab = 0;
  std::vector<SlabRecord> slabs;
  double setup_s = 0.0;
  double wall_s = 0.0;
  std::size_t patch_memory_bytes = 0;
  int failed_slab = -1;  // set when FGMRES did not converge
  std::string failure;

  double min_bu() const;
  double max_bu() const;
  double min_bp() const;
  double max_bp() const;
  double mean_iterations() const;
};

// Marches the benchmark on mesh level level_max; failures are recorded, not thrown.
BenchmarkResult run_benchmark(const RunConfig& c, const RunLog& log = {});

// CSV writers; schemas are documented in README.md.
void write_convergence_csv(const ConvergenceResult& r, const std::string& path);
void write_goal_csv(const BenchmarkResult& r, const std::string& path);
void write_solver_csv(const std::vector<SlabRecord>& slabs, const std::string& path);
void write_benchmark_summary(const BenchmarkResult& r, const std::string& path);
void write_productivity_csv(const PerfReport& r, const std::string& path);

struct Measurements {
  std::vector<int> n;
  std::vector<double> t_wall;
  std::vector<std::optional<double>> energy;  // empty when the column is absent
};
Measurements read_measurements(const std::string& path);
PerfReport run_perf(const std::string& measurements_path, const std::string& out_path);

}  // namespace stbiot
