#include "stbiot/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "stbiot/vtk.hpp"

namespace stbiot {

void RunLog::operator()(const std::string& line) const {
  if (os) *os << line << std::endl;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int slab_count(double t0, double t1, double tau) {
  const double n = (t1 - t0) / tau;
  const int N = static_cast<int>(std::llround(n));
  if (N < 1 || std::abs(n - N) > 1e-8 * std::max(1.0, n))
    throw ConfigError("time interval length " + fmt("%g", t1 - t0) + " is not a multiple of tau = " + fmt("%g", tau));
  return N;
}

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  os.precision(10);
  return os;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v, const char* f = "%.2f") { return v ? fmt(f, *v) : ""; }

}  // namespace

ProblemData benchmark_data() {
  ProblemData d;
  d.traction = [](const Point& x, double t) {
    // Applied only on the traction faces; everywhere else the Neumann datum is zero.
    if (std::abs(x[1] - 1.0) > 1e-12 || x[0] > 0.5 + 1e-12) return Vec3{0.0, 0.0, 0.0};
    return Vec3{0.0, 5e9 * (32.0 * x[0] * x[2] - 18.0 * x[0] - 16.0 * x[2] + 10.0) * std::sin(8.0 * kPi * t), 0.0};
  };
  return d;
}

ManufacturedCase manufactured_case(const RunConfig& c) {
  switch (c.problem) {
    case ProblemSel::conv1: return make_conv1(c.material());
    case ProblemSel::conv2: return make_conv2(c.material());
    default: throw ConfigError(std::string("problem '") + to_string(c.problem) + "' has no manufactured solution");
  }
}

TagFunction tag_function(const RunConfig& c) {
  const DomainSpec spec = c.domain();
  ProblemKind kind = ProblemKind::conv2d;
  if (c.problem == ProblemSel::lshape3d) kind = ProblemKind::lshape3d;
  if (c.problem == ProblemSel::custom) kind = ProblemKind::custom;
  const CustomBoundaryRule rule{c.custom_u, c.custom_p};
  return [spec, kind, rule](const MeshLevel& level) { return tag_boundary(spec, kind, level, rule); };
}

ConvergenceResult run_convergence(const RunConfig& c, const RunLog& log) {
  c.validate();
  if (c.problem != ProblemSel::conv1 && c.problem != ProblemSel::conv2)
    throw ConfigError("convergence studies need problem conv1 or conv2");
  const ManufacturedCase mc = manufactured_case(c);
  const ProblemData data = mc.solution.dirichlet_data();
  const double t0 = c.start_time();
  const DomainSpec spec = c.domain();
  const TagFunction tags = tag_function(c);

  ConvergenceResult res;
  for (int l = c.level_min; l <= c.level_max; ++l) {
    const auto start = Clock::now();
    const int refs = c.base_refinements + (c.refine == RefineMode::both ? l : 0);
    const MeshHierarchy mesh = build_hierarchy(spec, refs);
    const double tau = c.tau0 / std::pow(2.0, l);
    const int N = slab_count(t0, c.t_final, tau);
    const SpaceTimeSolver solver(mesh, tags, c.solver_setup(tau));

    ErrorAccumulator acc(solver.fine(), mc.solution, c.linf_samples);
    const TraceState init = project_initial_data(data, solver.fine(), t0);
    long iters = 0;
    solver.march(data, init, N, [&](const SlabState& s) {
      acc.add_slab(solver.time_basis_for(s.n, t0), s.X);
      iters += s.stats.iterations;
    });

    ConvergenceRow row;
    row.level = l;
    row.tau = tau;
    row.h = mesh.finest().h;
    row.dofs_per_slab = solver.fine().dofs().size();
    row.slabs = N;
    row.mean_iterations = static_cast<double>(iters) / N;
    row.errors = acc.result();
    row.wall_s = seconds_since(start);
    log("level " + std::to_string(l) + ": tau " + fmt("%g", tau) + ", h " + fmt("%.4g", row.h) + ", " +
        std::to_string(row.dofs_per_slab) + " dofs/slab, " + std::to_string(N) + " slabs, mean its " +
        fmt("%.2f", row.mean_iterations) + ", |grad e_u| " + num(row.errors.l2l2.grad_u) + ", |e_v| " +
        num(row.errors.l2l2.v) + ", |e_p| " + num(row.errors.l2l2.p) + ", " + fmt("%.1f", row.wall_s) + " s");
    res.rows.push_back(row);
  }
  return res;
}

double BenchmarkResult::min_bu() const {
  double v = slabs.empty() ? 0.0 : slabs[0].b_u;
  for (const auto& s : slabs) v = std::min(v, s.b_u);
  return v;
}
double BenchmarkResult::max_bu() const {
  double v = slabs.empty() ? 0.0 : slabs[0].b_u;
  for (const auto& s : slabs) v = std::max(v, s.b_u);
  return v;
}
double BenchmarkResult::min_bp() const {
  double v = slabs.empty() ? 0.0 : slabs[0].b_p;
  for (const auto& s : slabs) v = std::min(v, s.b_p);
  return v;
}
double BenchmarkResult::max_bp() const {
  double v = slabs.empty() ? 0.0 : slabs[0].b_p;
  for (const auto& s : slabs) v = std::max(v, s.b_p);
  return v;
}
double BenchmarkResult::mean_iterations() const {
  if (slabs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : slabs) sum += s.iterations;
  return sum / static_cast<double>(slabs.size());
}

BenchmarkResult run_benchmark(const RunConfig& c, const RunLog& log) {
  c.validate();
  if (c.problem != ProblemSel::lshape3d) throw ConfigError("the benchmark needs problem lshape3d");
  const auto start = Clock::now();
  BenchmarkResult res;
  res.level = c.level_max;
  const MeshHierarchy mesh = build_hierarchy(c.domain(), c.level_max);
  const double t0 = c.start_time();
  const int N = slab_count(t0, c.t_final, c.tau0);
  const SpaceTimeSolver solver(mesh, tag_function(c), c.solver_setup(c.tau0));
  res.dofs_per_slab = solver.fine().dofs().size();
  res.patch_memory_bytes = solver.mg().patch_memory_bytes();
  res.setup_s = seconds_since(start);
  log("benchmark ref " + std::to_string(c.level_max) + ": " + std::to_string(res.dofs_per_slab) + " dofs/slab, " +
      std::to_string(N) + " slabs, setup " + fmt("%.1f", res.setup_s) + " s, patch storage " +
      fmt("%.1f", res.patch_memory_bytes / 1048576.0) + " MiB");

  const ProblemData data = benchmark_data();
  const TraceState init = project_initial_data(data, solver.fine(), t0);
  try {
    solver.march(data, init, N, [&](const SlabState& s) {
      SlabRecord r;
      r.slab = s.n;
      r.t = s.t_end;
      r.iterations = s.stats.iterations;
      r.residual = s.stats.residual;
      r.wall_ms = s.stats.wall_ms;
      const GoalValues g = goal_quantities(s.trace, solver.fine());
      r.b_u = g.b_u;
      r.b_p = g.b_p;
      r.energy = discrete_energy(s.trace, solver.fine_forms());
      res.slabs.push_back(r);
      if (s.n % 50 == 0 || s.n == N)
        log("  slab " + std::to_string(s.n) + "/" + std::to_string(N) + " t=" + fmt("%.3f", r.t) + " its " +
            std::to_string(r.iterations) + " b_u " + num(r.b_u) + " b_p " + num(r.b_p));
      if (c.vtk && c.vtk_every > 0 && s.n % c.vtk_every == 0)
        write_vtk_fields(solver.fine(), s.trace, c.out_dir + "/fields_" + std::to_string(s.n) + ".vtk");
    });
  } catch (const ConvergenceError& e) {
    res.failed_slab = e.slab();
    res.failure = e.what();
    log(std::string("  ") + e.what());
  }
  res.wall_s = seconds_since(start);
  return res;
}

void write_convergence_csv(const ConvergenceResult& r, const std::string& path) {
  auto os = open_out(path);
  os << "level,tau,h";
  for (const char* norm : {"L2L2", "LinfL2", "linfL2"})
    for (const char* field : {"grad_u", "v", "p"}) os << ",err_" << field << '_' << norm << ",eoc_" << field << '_' << norm;
  os << ",dofs_per_slab,slabs,mean_iterations,wall_s\n";

  const std::size_t n = r.rows.size();
  auto column = [&](auto get) {
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = get(r.rows[i].errors);
    return std::make_pair(e, compute_eoc(e));
  };
  std::vector<std::pair<std::vector<double>, std::vector<std::optional<double>>>> cols = {
      column([](const ErrorReport& e) { return e.l2l2.grad_u; }), column([](const ErrorReport& e) { return e.l2l2.v; }),
      column([](const ErrorReport& e) { return e.l2l2.p; }),      column([](const ErrorReport& e) { return e.linf.grad_u; }),
      column([](const ErrorReport& e) { return e.linf.v; }),      column([](const ErrorReport& e) { return e.linf.p; }),
      column([](const ErrorReport& e) { return e.lnode.grad_u; }), column([](const ErrorReport& e) { return e.lnode.v; }),
      column([](const ErrorReport& e) { return e.lnode.p; })};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = r.rows[i];
    os << row.level << ',' << num(row.tau) << ',' << num(row.h);
    for (const auto& [e, eoc] : cols) os << ',' << num(e[i]) << ',' << (i > 0 ? opt_num(eoc[i - 1]) : "");
    os << ',' << row.dofs_per_slab << ',' << row.slabs << ',' << fmt("%.2f", row.mean_iterations) << ','
       << fmt("%.2f", row.wall_s) << '\n';
  }
}

void write_goal_csv(const BenchmarkResult& r, const std::string& path) {
  auto os = open_out(path);
  os << "t,b_u,b_p\n";
  for (const auto& s : r.slabs) os << fmt("%.8f", s.t) << ',' << num(s.b_u) << ',' << num(s.b_p) << '\n';
}

void write_solver_csv(const std::vector<SlabRecord>& slabs, const std::string& path) {
  auto os = open_out(path);
  os << "slab,iterations,residual,wall_ms\n";
  for (const auto& s : slabs) os << s.slab << ',' << s.iterations << ',' << num(s.residual) << ',' << fmt("%.3f", s.wall_ms) << '\n';
}

void write_benchmark_summary(const BenchmarkResult& r, const std::string& path) {
  auto os = open_out(path);
  os << "key,value\n"
     << "level," << r.level << '\n'
     << "dofs_per_slab," << r.dofs_per_slab << '\n'
     << "slabs," << r.slabs.size() << '\n'
     << "b_u_min," << num(r.min_bu()) << '\n'
     << "b_u_max," << num(r.max_bu()) << '\n'
     << "b_p_min," << num(r.min_bp()) << '\n'
     << "b_p_max," << num(r.max_bp()) << '\n'
     << "mean_iterations," << fmt("%.3f", r.mean_iterations()) << '\n'
     << "setup_s," << fmt("%.2f", r.setup_s) << '\n'
     << "wall_s," << fmt("%.2f", r.wall_s) << '\n'
     << "patch_memory_mib," << fmt("%.1f", r.patch_memory_bytes / 1048576.0) << '\n'
     << "failed_slab," << r.failed_slab << '\n';
}

void write_productivity_csv(const PerfReport& r, const std::string& path) {
  auto os = open_out(path);
  os << "n,t_wall,E,S,R,P\n";
  for (const auto& row : r.rows)
    os << row.n << ',' << fmt("%.6g", row.t_wall) << ',' << opt_num(row.energy, "%.6g") << ',' << fmt("%.4f", row.S)
       << ',' << opt_num(row.R, "%.4f") << ',' << opt_num(row.P, "%.4f") << '\n';
}

Measurements read_measurements(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open measurements file " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("measurements file is empty");
  const auto header = split(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int cn = col("n"), ct = col("t_wall"), ce = col("E");
  if (cn < 0 || ct < 0) throw ConfigError("measurements need columns n and t_wall");
  Measurements m;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    auto cell = [&](int i) { return i < static_cast<int>(cells.size()) ? cells[i] : std::string(); };
    try {
      m.n.push_back(std::stoi(cell(cn)));
      m.t_wall.push_back(std::stod(cell(ct)));
      if (ce >= 0) m.energy.push_back(cell(ce).empty() ? std::nullopt : std::optional<double>(std::stod(cell(ce))));
    } catch (const std::exception&) {
      throw ConfigError("measurements line " + std::to_string(lineno) + ": cannot parse '" + line + "'");
    }
  }
  if (m.n.empty()) throw ConfigError("measurements file has no rows");
  // A column of blanks means no energies were measured.
  if (std::none_of(m.energy.begin(), m.energy.end(), [](const auto& e) { return e.has_value(); })) m.energy.clear();
  return m;
}

PerfReport run_perf(const std::string& measurements_path, const std::string& out_path) {
  const Measurements m = read_measurements(measurements_path);
  PerfReport r = perf_model(m.n, m.t_wall, m.energy);
  write_productivity_csv(r, out_path);
  return r;
}

}  // namespace stbiot
