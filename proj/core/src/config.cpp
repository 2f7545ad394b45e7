#include "stbiot/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace stbiot {

const char* to_string(ProblemSel p) {
  switch (p) {
    case ProblemSel::conv1: return "conv1";
    case ProblemSel::conv2: return "conv2";
    case ProblemSel::lshape3d: return "lshape3d";
    case ProblemSel::custom: return "custom";
  }
  return "?";
}

const char* to_string(RefineMode m) { return m == RefineMode::both ? "both" : "tau"; }

namespace {

struct Value {
  enum Kind { string, number, boolean, array } kind = string;
  std::string s;
  double d = 0.0;
  bool b = false;
  std::vector<double> arr;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& tok, int line) {
  double d = 0.0;
  const std::string t = tok.size() > 1 && tok[0] == '+' ? tok.substr(1) : tok;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), d);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ConfigError("line " + std::to_string(line) + ": cannot parse number '" + tok + "'");
  return d;
}

std::string format_number(double d) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, p);
}

// Removes a trailing comment outside of quotes.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

Value parse_value(const std::string& raw, int line) {
  Value v;
  if (raw.empty()) throw ConfigError("line " + std::to_string(line) + ": missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      throw ConfigError("line " + std::to_string(line) + ": unterminated string");
    v.kind = Value::string;
    v.s = raw.substr(1, raw.size() - 2);
  } else if (raw == "true" || raw == "false") {
    v.kind = Value::boolean;
    v.b = raw == "true";
  } else if (raw.front() == '[') {
    if (raw.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated array");
    v.kind = Value::array;
    std::stringstream ss(raw.substr(1, raw.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) v.arr.push_back(parse_number(item, line));
    }
  } else {
    v.kind = Value::number;
    v.d = parse_number(raw, line);
  }
  return v;
}

struct Binding {
  std::string section, key;
  std::function<void(RunConfig&, const Value&, int)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;  // nullopt: omit
};

[[noreturn]] void type_error(const std::string& key, int line, const char* want) {
  throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects " + want);
}

Binding bind_double(std::string sec, std::string key, double RunConfig::*m) {
  return {sec, key,
          [m, key](RunConfig& c, const Value& v, int line) {
            if (v.kind != Value::number) type_error(key, line, "a number");
            c.*m = v.d;
          },
          [m](const RunConfig& c) { return std::optional<std::string>(format_number(c.*m)); }};
}

Binding bind_opt(std::string sec, std::string key, std::optional<double> RunConfig::*m) {
  return {sec, key,
          [m, key](RunConfig& c, const Value& v, int line) {
            if (v.kind != Value::number) type_error(key, line, "a number");
            c.*m = v.d;
          },
          [m](const RunConfig& c) {
            return (c.*m) ? std::optional<std::string>(format_number(*(c.*m))) : std::nullopt;
          }};
}

Binding bind_int(std::string sec, std::string key, int RunConfig::*m) {
  return {sec, key,
          [m, key](RunConfig& c, const Value& v, int line) {
            if (v.kind != Value::number || v.d != static_cast<int>(v.d)) type_error(key, line, "an integer");
            c.*m = static_cast<int>(v.d);
          },
          [m](const RunConfig& c) { return std::optional<std::string>(std::to_string(c.*m)); }};
}

Binding bind_bool(std::string sec, std::string key, bool RunConfig::*m) {
  return {sec, key,
          [m, key](RunConfig& c, const Value& v, int line) {
            if (v.kind != Value::boolean) type_error(key, line, "true or false");
            c.*m = v.b;
          },
          [m](const RunConfig& c) { return std::optional<std::string>(c.*m ? "true" : "false"); }};
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

Binding bind_string(std::string sec, std::string key, std::string RunConfig::*m) {
  return {sec, key,
          [m, key](RunConfig& c, const Value& v, int line) {
            if (v.kind != Value::string) type_error(key, line, "a quoted string");
            c.*m = v.s;
          },
          [m](const RunConfig& c) { return std::optional<std::string>(quote(c.*m)); }};
}

Binding bind_array(std::string sec, std::string key, std::vector<double> RunConfig::*m) {
  return {sec, key,
          [m, key](RunConfig& c, const Value& v, int line) {
            if (v.kind != Value::array) type_error(key, line, "an array of numbers");
            c.*m = v.arr;
          },
          [m](const RunConfig& c) -> std::optional<std::string> {
            if ((c.*m).empty()) return std::nullopt;
            std::string s = "[";
            for (std::size_t i = 0; i < (c.*m).size(); ++i) s += (i ? ", " : "") + format_number((c.*m)[i]);
            return s + "]";
          }};
}

template <class E>
Binding bind_enum(std::string sec, std::string key, E RunConfig::*m, std::vector<E> values) {
  return {sec, key,
          [m, key, values](RunConfig& c, const Value& v, int line) {
            if (v.kind != Value::string) type_error(key, line, "a quoted string");
            std::string allowed;
            for (E e : values) {
              if (v.s == to_string(e)) {
                c.*m = e;
                return;
              }
              allowed += std::string(allowed.empty() ? "" : "|") + to_string(e);
            }
            throw ConfigError("line " + std::to_string(line) + ": '" + key + "' must be one of " + allowed);
          },
          [m](const RunConfig& c) { return std::optional<std::string>(quote(to_string(c.*m))); }};
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> b = {
      bind_enum("run", "problem", &RunConfig::problem,
                {ProblemSel::conv1, ProblemSel::conv2, ProblemSel::lshape3d, ProblemSel::custom}),
      bind_string("run", "name", &RunConfig::name),
      bind_int("discretization", "k", &RunConfig::k),
      bind_int("discretization", "r", &RunConfig::r),
      bind_enum("discretization", "pair", &RunConfig::pair, {Pair::qq, Pair::qpdisc}),
      bind_enum("discretization", "formulation", &RunConfig::formulation, {Formulation::dsa, Formulation::ds}),
      bind_enum("discretization", "h_F_mode", &RunConfig::hf_mode, {HfMode::measure, HfMode::diameter}),
      bind_opt("discretization", "gamma_a", &RunConfig::gamma_a),
      bind_opt("discretization", "gamma_b", &RunConfig::gamma_b),
      bind_opt("discretization", "gamma", &RunConfig::gamma),
      bind_int("mesh", "coarse_cells", &RunConfig::coarse_cells),
      bind_int("mesh", "base_refinements", &RunConfig::base_refinements),
      bind_int("mesh", "level_min", &RunConfig::level_min),
      bind_int("mesh", "level_max", &RunConfig::level_max),
      bind_enum("mesh", "refine", &RunConfig::refine, {RefineMode::both, RefineMode::tau}),
      bind_int("mesh", "custom_dim", &RunConfig::custom_dim),
      bind_array("mesh", "custom_blocks", &RunConfig::custom_blocks),
      bind_enum("mesh", "custom_u", &RunConfig::custom_u, {UTag::dirichlet, UTag::neumann, UTag::directional}),
      bind_enum("mesh", "custom_p", &RunConfig::custom_p, {PTag::dirichlet, PTag::neumann}),
      bind_double("time", "tau0", &RunConfig::tau0),
      bind_opt("time", "t_start", &RunConfig::t_start),
      bind_double("time", "t_final", &RunConfig::t_final),
      bind_double("material", "rho", &RunConfig::rho),
      bind_double("material", "alpha", &RunConfig::alpha),
      bind_double("material", "c0", &RunConfig::c0),
      bind_opt("material", "young", &RunConfig::young),
      bind_opt("material", "poisson", &RunConfig::poisson),
      bind_double("material", "lambda", &RunConfig::lambda),
      bind_double("material", "mu", &RunConfig::mu),
      bind_double("material", "permeability", &RunConfig::permeability),
      bind_double("smoother", "omega", &RunConfig::omega),
      bind_int("smoother", "sweeps", &RunConfig::sweeps),
      bind_enum("smoother", "patch", &RunConfig::patch, {PatchKind::vertex, PatchKind::cell}),
      bind_enum("smoother", "patch_solver", &RunConfig::patch_solver,
                {PatchSolverKind::dense_lu, PatchSolverKind::time_diagonal}),
      bind_bool("smoother", "single_precision", &RunConfig::single_precision),
      bind_enum("solver", "kind", &RunConfig::solver, {SolverKind::gmg, SolverKind::direct}),
      bind_double("solver", "tol", &RunConfig::tol),
      bind_double("solver", "tol_rel", &RunConfig::tol_rel),
      bind_int("solver", "max_iter", &RunConfig::max_iter),
      bind_int("solver", "refine_steps", &RunConfig::refine_steps),
      bind_int("solver", "coarse_level", &RunConfig::coarse_level),
      bind_int("solver", "threads", &RunConfig::threads),
      bind_bool("solver", "deterministic", &RunConfig::deterministic),
      bind_string("output", "dir", &RunConfig::out_dir),
      bind_bool("output", "vtk", &RunConfig::vtk),
      bind_int("output", "vtk_every", &RunConfig::vtk_every),
      bind_bool("output", "energy", &RunConfig::energy),
      bind_int("output", "linf_samples", &RunConfig::linf_samples),
  };
  return b;
}

}  // namespace

double RunConfig::start_time() const {
  if (t_start) return *t_start;
  return problem == ProblemSel::conv1 ? 1.0 : 0.0;
}

MaterialParams RunConfig::material() const {
  MaterialParams m;
  m.rho = rho;
  m.alpha = alpha;
  m.c0 = c0;
  if (young && poisson) {
    m.set_young(*young, *poisson);
  } else {
    m.lambda = lambda;
    m.mu = mu;
  }
  for (int i = 0; i < 3; ++i) m.K[i][i] = permeability;
  return m;
}

NitscheParams RunConfig::nitsche() const {
  NitscheParams n = NitscheParams::defaults(r);
  if (gamma_a) n.gamma_a = *gamma_a;
  if (gamma_b) n.gamma_b = *gamma_b;
  if (gamma) n.gamma = *gamma;
  return n;
}

SolverSetup RunConfig::solver_setup(double tau) const {
  SolverSetup s;
  s.pair = pair;
  s.r = r;
  s.k = k;
  s.formulation = formulation;
  s.material = material();
  s.nitsche = nitsche();
  s.hf_mode = hf_mode;
  s.tau = tau;
  s.smoother.omega = omega;
  s.smoother.sweeps = sweeps;
  s.smoother.threads = threads;
  s.smoother.deterministic = deterministic;
  s.smoother.patch_kind = patch;
  s.smoother.patch_solver = patch_solver;
  s.smoother.single_precision = single_precision;
  s.krylov.tol_abs = tol;
  s.krylov.tol_rel = tol_rel;
  s.krylov.max_iter = max_iter;
  s.refine_steps = refine_steps;
  s.solver = solver;
  s.coarse_level = coarse_level;
  return s;
}

DomainSpec RunConfig::domain() const {
  switch (problem) {
    case ProblemSel::conv1:
    case ProblemSel::conv2: return DomainSpec::unit_square(coarse_cells);
    case ProblemSel::lshape3d: return DomainSpec::l_shape_3d();
    case ProblemSel::custom: {
      const std::size_t per = 2 * static_cast<std::size_t>(custom_dim);
      if (custom_blocks.empty() || custom_blocks.size() % per != 0)
        throw ConfigError("custom_blocks must hold 2*custom_dim numbers per block");
      std::vector<Box> boxes;
      for (std::size_t i = 0; i < custom_blocks.size(); i += per) {
        Box b;
        for (int d = 0; d < custom_dim; ++d) {
          b.lo[d] = custom_blocks[i + d];
          b.hi[d] = custom_blocks[i + custom_dim + d];
        }
        boxes.push_back(b);
      }
      return DomainSpec::custom_blocks(custom_dim, boxes);
    }
  }
  throw ConfigError("unknown problem");
}

void RunConfig::validate() const {
  if (k < 0) throw ConfigError("k must be >= 0");
  if (r < 2) throw ConfigError("r must be >= 2");
  if (!(tau0 > 0.0)) throw ConfigError("tau0 must be positive");
  if (!(t_final > start_time())) throw ConfigError("t_final must exceed the start time");
  if (level_min < 0 || level_max < level_min) throw ConfigError("invalid level range");
  if (base_refinements < 0 || coarse_cells < 1) throw ConfigError("invalid coarse mesh");
  if (sweeps < 1 || !(omega > 0.0)) throw ConfigError("invalid smoother parameters");
  if (max_iter < 1 || !(tol > 0.0) || tol_rel < 0.0) throw ConfigError("invalid solver tolerances");
  if (refine_steps < 0) throw ConfigError("refine_steps must be >= 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (linf_samples < 0) throw ConfigError("linf_samples must be >= 0");
  if (problem == ProblemSel::custom && custom_dim != 2 && custom_dim != 3)
    throw ConfigError("custom_dim must be 2 or 3");
  if (!!young != !!poisson) throw ConfigError("young and poisson must be given together");
  material().validate(problem == ProblemSel::lshape3d ? 3 : (problem == ProblemSel::custom ? custom_dim : 2));
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::map<std::string, const Binding*> table;
  for (const auto& b : bindings()) table[b.section + "." + b.key] = &b;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string full = section + "." + key;
    const auto it = table.find(full);
    if (it == table.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + full + "'");
    if (seen.count(full)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
    seen[full] = lineno;
    it->second->set(c, parse_value(trim(line.substr(eq + 1)), lineno), lineno);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::string out, section;
  for (const auto& b : bindings()) {
    const auto v = b.get(c);
    if (!v) continue;
    if (b.section != section) {
      out += (out.empty() ? "[" : "\n[") + b.section + "]\n";
      section = b.section;
    }
    out += b.key + " = " + *v + "\n";
  }
  return out;
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  std::pair<int, int> r;
  try {
    std::size_t end = 0;
    if (dots == std::string::npos) {
      r.first = r.second = std::stoi(s, &end);
      if (end != s.size()) throw ConfigError("");
    } else {
      const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
      r.first = std::stoi(a, &end);
      if (end != a.size()) throw ConfigError("");
      r.second = std::stoi(b, &end);
      if (end != b.size()) throw ConfigError("");
    }
  } catch (const std::exception&) {
    throw ConfigError("invalid range '" + s + "', expected a..b");
  }
  if (r.first < 0 || r.second < r.first) throw ConfigError("invalid range '" + s + "'");
  return r;
}

}  // namespace stbiot
