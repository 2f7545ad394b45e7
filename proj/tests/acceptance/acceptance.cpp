// Acceptance gate: one PASS/FAIL line per criterion, CSVs of every run under --out.
//   stbiot_acceptance [--out DIR] [--only name,name,...]
// Names: table1 table2 table3 pair_and_stiffness benchmark grid_robustness oracle invariants perf

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "stbiot/config.hpp"
#include "stbiot/diagnostics.hpp"
#include "stbiot/experiments.hpp"
#include "stbiot/quadrature.hpp"

using namespace stbiot;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string out_dir = "acceptance";
const RunLog progress{&std::cerr};

RunConfig preset(const std::string& name) {
  RunConfig c = load_config(std::string(STBIOT_PRESET_DIR) + "/" + name + ".toml");
  c.out_dir = out_dir + "/" + name;
  return c;
}

// Convergence runs are shared between criteria.
std::map<std::string, ConvergenceResult> cache;

const ConvergenceResult& convergence(const std::string& key, RunConfig c) {
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  c.out_dir = out_dir + "/" + key;
  std::filesystem::create_directories(c.out_dir);
  progress("[" + key + "] levels " + std::to_string(c.level_min) + ".." + std::to_string(c.level_max));
  ConvergenceResult r = run_convergence(c, progress);
  write_convergence_csv(r, c.out_dir + "/convergence.csv");
  return cache.emplace(key, std::move(r)).first->second;
}

RunConfig levels(RunConfig c, int lo, int hi) {
  c.level_min = lo;
  c.level_max = hi;
  return c;
}

const char* kFields[] = {"grad_u", "v", "p"};

std::array<double, 3> l2l2(const ConvergenceRow& r) { return {r.errors.l2l2.grad_u, r.errors.l2l2.v, r.errors.l2l2.p}; }
std::array<double, 3> lnode(const ConvergenceRow& r) { return {r.errors.lnode.grad_u, r.errors.lnode.v, r.errors.lnode.p}; }

double eoc(double coarse, double fine) { return std::log2(coarse / fine); }

using Triple = std::array<double, 3>;

void compare_errors(Outcome& o, const ConvergenceResult& r, const std::map<int, Triple>& ref, double tol) {
  for (const auto& [level, expect] : ref) {
    const auto row = std::find_if(r.rows.begin(), r.rows.end(), [&](const auto& x) { return x.level == level; });
    if (row == r.rows.end()) {
      o.check(false, "level " + std::to_string(level) + " missing");
      continue;
    }
    const Triple got = l2l2(*row);
    for (int f = 0; f < 3; ++f) {
      const double rel = std::abs(got[f] - expect[f]) / expect[f];
      o.check(rel <= tol, "level " + std::to_string(level) + " " + kFields[f] + " L2L2 " + fmt("%.6e", got[f]) +
                              " vs " + fmt("%.6e", expect[f]) + " (" + fmt("%.2f", 100 * rel) + "% <= " +
                              fmt("%.0f", 100 * tol) + "%)");
    }
  }
}

void check_last_eoc(Outcome& o, const ConvergenceResult& r, double target, double tol, const std::string& norm,
                    std::array<double, 3> (*get)(const ConvergenceRow&)) {
  const std::size_t n = r.rows.size();
  if (n < 2) {
    o.check(false, "fewer than two levels");
    return;
  }
  const Triple a = get(r.rows[n - 2]), b = get(r.rows[n - 1]);
  for (int f = 0; f < 3; ++f) {
    const double e = eoc(a[f], b[f]);
    o.check(std::abs(e - target) <= tol, "level " + std::to_string(r.rows[n - 1].level) + " " + kFields[f] + " " +
                                             norm + " EOC " + fmt("%.3f", e) + " in " + fmt("%.2f", target) + " +- " +
                                             fmt("%.2f", tol));
  }
}

// Reference values.
const std::map<int, Triple> kTable1 = {
    {0, {1.2544218392e-02, 3.4897282317e-02, 2.4070118274e-03}},
    {1, {1.5227995262e-03, 3.9246006564e-03, 2.8841669021e-04}},
    {2, {1.8904870171e-04, 4.8175203148e-04, 3.5986044195e-05}}};
const std::map<int, Triple> kTable2 = {{0, {2.3958455291e-03, 1.7185653242e-02, 7.0604463908e-04}},
                                       {1, {1.0529085600e-04, 5.4558622568e-04, 3.4799927094e-05}}};
const std::map<int, Triple> kTable7 = {{1, {1.0529091363e-04, 5.4558642696e-04, 3.8993048591e-05}}};

Outcome table1() {
  Outcome o;
  const auto& r = convergence("table1", levels(preset("table1"), 0, 2));
  compare_errors(o, r, kTable1, 0.02);
  check_last_eoc(o, r, 3.0, 0.10, "L2L2", l2l2);
  return o;
}

Outcome table2() {
  Outcome o;
  compare_errors(o, convergence("table2", levels(preset("table2"), 0, 1)), kTable2, 0.02);
  return o;
}

Outcome table3() {
  Outcome o;
  const auto& r = convergence("table3", preset("table3"));
  const std::size_t n = r.rows.size();
  if (n < 4) {
    o.check(false, "table3 needs at least four levels");
    return o;
  }
  // Each of the last three level-to-level orders in the nodal norm.
  for (std::size_t i = n - 3; i < n; ++i) {
    const Triple a = lnode(r.rows[i - 1]), b = lnode(r.rows[i]);
    for (int f = 0; f < 3; ++f) {
      const double e = eoc(a[f], b[f]);
      o.check(std::abs(e - 5.0) <= 0.2, "level " + std::to_string(r.rows[i].level) + " " + kFields[f] +
                                            " l-inf EOC " + fmt("%.3f", e) + " in 5.0 +- 0.2 (error " +
                                            fmt("%.4e", b[f]) + ")");
    }
  }
  check_last_eoc(o, r, 3.0, 0.10, "L2L2", l2l2);
  return o;
}

Outcome pair_and_stiffness() {
  Outcome o;
  compare_errors(o, convergence("table7", levels(preset("table7"), 0, 1)), kTable7, 0.05);
  check_last_eoc(o, convergence("table8", levels(preset("table8"), 0, 2)), 3.0, 0.15, "L2L2", l2l2);
  return o;
}

Outcome benchmark() {
  Outcome o;
  RunConfig c = preset("lshape_ref2");
  std::filesystem::create_directories(c.out_dir);
  progress("[lshape_ref2] " + std::to_string(static_cast<int>(std::lround((c.t_final - c.start_time()) / c.tau0))) +
           " slabs");
  const BenchmarkResult r = run_benchmark(c, progress);
  write_goal_csv(r, c.out_dir + "/goal.csv");
  write_solver_csv(r.slabs, c.out_dir + "/solver.csv");
  write_benchmark_summary(r, c.out_dir + "/summary.csv");
  o.check(r.failed_slab < 0, "all slabs converged" + (r.failure.empty() ? std::string() : ": " + r.failure));
  auto within = [&](const char* what, double got, double expect) {
    const double rel = std::abs(got - expect) / std::abs(expect);
    o.check(rel <= 0.05, std::string(what) + " " + fmt("%.5g", got) + " vs " + fmt("%.5g", expect) + " (" +
                             fmt("%.3g", 100 * rel) + "% <= 5%)");
  };
  within("min b_u", r.min_bu(), -1.674e-02);
  within("max b_u", r.max_bu(), 1.676e-02);
  within("min b_p", r.min_bp(), -942.600);
  within("max b_p", r.max_bp(), 945.243);
  const double it = r.mean_iterations();
  o.check(it >= 7.0 && it <= 15.0, "mean FGMRES iterations " + fmt("%.2f", it) + " in [7, 15]");
  return o;
}

Outcome grid_robustness() {
  Outcome o;
  const auto& r = convergence("table1", levels(preset("table1"), 0, 2));
  double lo = 1e300, hi = 0.0;
  std::string its;
  for (const auto& row : r.rows) {
    lo = std::min(lo, row.mean_iterations);
    hi = std::max(hi, row.mean_iterations);
    its += fmt(" %.2f", row.mean_iterations);
  }
  const double mean = 0.5 * (lo + hi);
  o.check(hi <= 1.5 * mean && lo >= 0.5 * mean, "mean iterations per level" + its + " within +-50% of " +
                                                    fmt("%.2f", mean));
  return o;
}

SolverSetup conv_setup(const RunConfig& c, int k, Formulation f, double tau) {
  RunConfig cc = c;
  cc.k = k;
  cc.formulation = f;
  return cc.solver_setup(tau);
}

Outcome oracle() {
  Outcome o;
  RunConfig c = preset("table1");
  c.tol = 1e-14;
  c.tol_rel = 1e-12;
  // Mesh levels 0..2 of the unit square, small enough for a dense factorization.
  for (int level = 0; level <= 2; ++level) {
    const MeshHierarchy mesh = build_hierarchy(c.domain(), level);
    const double tau = c.tau0;
    const ManufacturedCase mc = manufactured_case(c);
    const ProblemData data = mc.solution.dirichlet_data();
    const SpaceTimeSolver s(mesh, tag_function(c), c.solver_setup(tau));
    const TraceState init = project_initial_data(data, s.fine(), mc.t_start);
    const SlabState gmg = s.solve_slab(data, init, 1, mc.t_start);
    const Vector b = assemble_slab_rhs(data, init, s.fine(), s.fine_forms(),
                                       TimeBasis(c.k, mc.t_start, mc.t_start + tau), c.formulation);
    const Vector x = DenseMatrix(s.slab_operator().assemble()).partialPivLu().solve(b);
    const double rel = (gmg.X - x).norm() / x.norm();
    o.check(gmg.stats.converged && rel <= 1e-6, "level " + std::to_string(level) + ", " +
                                                    std::to_string(x.size()) + " unknowns: relative difference " +
                                                    fmt("%.2e", rel) + " <= 1e-6 after " +
                                                    std::to_string(gmg.stats.iterations) + " iterations");
  }
  return o;
}

Outcome invariants() {
  Outcome o;
  {
    double worst = 0.0;
    for (int k = 0; k <= 6; ++k) {
      const Rule1D r = gauss_radau_right(k);
      for (int d = 0; d <= 2 * k; ++d) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.points[i], d);
        worst = std::max(worst, std::abs(s - (d % 2 ? 0.0 : 2.0 / (d + 1))));
      }
    }
    o.check(worst <= 1e-13, "Radau rules k = 0..6 exact to degree 2k, worst defect " + fmt("%.1e", worst));
  }

  const RunConfig c = preset("table1");
  const MeshHierarchy mesh = build_hierarchy(c.domain(), c.base_refinements);
  const TagFunction tags = tag_function(c);
  {
    double sym = 0.0, la = 1e300, lb = 1e300;
    auto visit = [&](const Discretization& d) {
      const FormMatrices f = d.assemble_forms();
      for (const SparseMatrix* m : {&f.elasticity, &f.pressure, &f.mass_v, &f.mass_q})
        sym = std::max(sym, symmetry_defect(*m));
      const CoercivityReport r = coercivity_diagnostic(f);
      la = std::min(la, r.lambda_min_A);
      lb = std::min(lb, r.lambda_min_B);
    };
    for (Pair pair : {Pair::qq, Pair::qpdisc})
      for (int r : {2, 3})
        visit(Discretization(mesh.finest(), tags(mesh.finest()), pair, r, 1, c.material(), NitscheParams::defaults(r)));
    const RunConfig b = preset("lshape_ref2");
    const MeshHierarchy m3 = build_hierarchy(b.domain(), 0);
    visit(Discretization(m3.finest(), tag_function(b)(m3.finest()), Pair::qpdisc, 2, 1, b.material(),
                         NitscheParams::defaults(2)));
    o.check(sym <= 1e-12, "form symmetry defect " + fmt("%.1e", sym) + " <= 1e-12");
    o.check(la > 0.0 && lb > 0.0, "coercivity at default penalties: lambda_min(A) " + fmt("%.3e", la) +
                                      ", lambda_min(B) " + fmt("%.3e", lb));
  }

  const SpaceTimeSolver s(mesh, tags, c.solver_setup(c.tau0));
  const MgHierarchy& mg = s.mg();
  {
    const VankaSmoother& S = *mg.level(mg.n_levels() - 1).smoother;
    Vector x = Vector::LinSpaced(s.slab_operator().size(), -1.0, 1.0);
    const Vector exact = x;
    S.smooth(x, s.slab_operator() * exact);
    const double fp = (x - exact).norm() / exact.norm();
    o.check(fp <= 1e-12, "Vanka sweep keeps the exact solution, relative change " + fmt("%.1e", fp));

    // Counters against an independent count over vertex patches.
    const DofMap& dofs = s.fine().dofs();
    std::vector<double> count(s.slab_operator().size(), 0.0);
    std::vector<int> cd;
    for (const Patch& p : collect_patches(mesh.finest())) {
      std::set<int> g;
      for (int cell : p.cells) {
        dofs.cell_vector_dofs(cell, cd);
        const int* q = dofs.qspace().cell_dofs(cell);
        for (int m = 0; m < dofs.n_radau(); ++m) {
          for (int i : cd) {
            g.insert(dofs.index(Field::v, m, i));
            g.insert(dofs.index(Field::u, m, i));
          }
          for (int j = 0; j < dofs.qspace().dofs_per_cell(); ++j) g.insert(dofs.index(Field::p, m, q[j]));
        }
      }
      for (int i : g) count[i] += 1.0;
    }
    o.check(S.counts() == count, "averaging counters equal the number of patches holding each unknown");
  }
  {
    double diff = 0.0;
    for (int l = 1; l < mg.n_levels(); ++l)
      diff = std::max(diff, (mg.level(l).R - SparseMatrix(mg.level(l).P.transpose())).norm());
    o.check(mg.n_levels() > 1 && diff == 0.0, "restriction equals the transpose of prolongation on " +
                                                  std::to_string(mg.n_levels() - 1) + " transfers");
  }
  {
    // Free vibration from a nonzero state without loads.
    constexpr double pi = 3.14159265358979323846;
    ProblemData init;
    init.u0 = [](const Point& x, double) {
      const double b = std::sin(pi * x[0]) * std::sin(pi * x[1]);
      return Vec3{b, -0.5 * b, 0.0};
    };
    init.u1 = [](const Point& x, double) { return Vec3{0.0, x[0] * (1 - x[0]) * x[1] * (1 - x[1]), 0.0}; };
    init.p0 = [](const Point& x, double) { return std::cos(pi * x[0]) * x[1]; };
    const MeshHierarchy small = build_hierarchy(c.domain(), 1);
    for (int k : {0, 1, 2})
      for (Formulation f : {Formulation::dsa, Formulation::ds}) {
        SolverSetup setup = conv_setup(c, k, f, 0.05);
        setup.r = 2;
        setup.nitsche = NitscheParams::defaults(2);
        setup.krylov.tol_abs = 1e-13;
        const SpaceTimeSolver st(small, tags, setup);
        const TraceState s0 = project_initial_data(init, st.fine(), 0.0);
        double prev = discrete_energy(s0, st.fine_forms());
        const double e0 = prev;
        bool monotone = true;
        st.march(ProblemData{}, s0, 20, [&](const SlabState& slab) {
          const double e = discrete_energy(slab.trace, st.fine_forms());
          monotone = monotone && e <= prev * (1.0 + 1e-10);
          prev = e;
        });
        o.check(monotone, std::string("energy non-increasing over 20 slabs, k = ") + std::to_string(k) + ", " +
                              to_string(f) + ": " + fmt("%.6e", e0) + " -> " + fmt("%.6e", prev));
      }
  }
  {
    const auto& dsa = convergence("table1", levels(c, 0, 2));
    RunConfig ds = levels(c, 0, 2);
    ds.formulation = Formulation::ds;
    const auto& dsr = convergence("table1_ds", ds);
    for (std::size_t i = 1; i < std::min(dsa.rows.size(), dsr.rows.size()); ++i)
      for (int f = 0; f < 3; ++f) {
        const double a = eoc(l2l2(dsa.rows[i - 1])[f], l2l2(dsa.rows[i])[f]);
        const double b = eoc(l2l2(dsr.rows[i - 1])[f], l2l2(dsr.rows[i])[f]);
        o.check(std::abs(a - b) <= 0.15, "level " + std::to_string(dsa.rows[i].level) + " " + kFields[f] +
                                             " EOC dsa " + fmt("%.3f", a) + ", ds " + fmt("%.3f", b));
      }
  }
  return o;
}

Outcome perf() {
  Outcome o;
  struct Row {
    int n;
    double t, E, S, R, P;
  };
  const std::vector<Row> table = {{20, 12.00, 98.31, 1.00, 1.00, 1.00},  {40, 7.22, 133.49, 1.66, 1.36, 1.22},
                                  {80, 4.87, 173.50, 2.47, 1.76, 1.40},  {120, 4.23, 220.61, 2.83, 2.24, 1.26},
                                  {160, 3.98, 272.48, 3.02, 2.77, 1.09}, {200, 3.72, 316.34, 3.22, 3.22, 1.00}};
  std::vector<int> n;
  std::vector<double> t;
  std::vector<std::optional<double>> e;
  for (const auto& r : table) {
    n.push_back(r.n);
    t.push_back(r.t);
    e.push_back(r.E);
  }
  const PerfReport rep = perf_model(n, t, e);
  std::filesystem::create_directories(out_dir + "/perf");
  write_productivity_csv(rep, out_dir + "/perf/productivity.csv");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& got = rep.rows[i];
    const auto& x = table[i];
    const double d = std::max({std::abs(got.S - x.S), std::abs(*got.R - x.R), std::abs(*got.P - x.P)});
    o.check(d <= 0.01 + 1e-12, "n = " + std::to_string(x.n) + ": S " + fmt("%.3f", got.S) + ", R " +
                                   fmt("%.3f", *got.R) + ", P " + fmt("%.3f", *got.P) + " (max deviation " +
                                   fmt("%.4f", d) + ")");
  }
  const int peak = rep.peak();
  o.check(peak >= 0 && rep.rows[peak].n == 80, "peak productivity at n = " +
                                                   std::to_string(peak >= 0 ? rep.rows[peak].n : -1));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      out_dir = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string s; std::getline(ss, s, ',');) only.insert(s);
    } else {
      std::cerr << "usage: stbiot_acceptance [--out DIR] [--only name,...]\n";
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"table1", table1},         {"table2", table2},       {"table3", table3},
      {"pair_and_stiffness", pair_and_stiffness}, {"grid_robustness", grid_robustness},
      {"oracle", oracle},         {"invariants", invariants},
      {"perf", perf},             {"benchmark", benchmark}};
  for (const auto& name : only)
    if (std::none_of(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == name; })) {
      std::cerr << "unknown criterion '" << name << "'\n";
      return 2;
    }
  std::filesystem::create_directories(out_dir);
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << '\n';
    for (const auto& d : o.details) std::cout << "    " << d << '\n';
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}
