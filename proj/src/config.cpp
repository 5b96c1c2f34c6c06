#include "kfw/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "kfw/bench.hpp"
#include "kfw/errors.hpp"
#include "kfw/io.hpp"

namespace kfw {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct RawEntry {
  std::string value;
  std::size_t line = 0;
};

struct ParseState {
  std::vector<std::string> errors;

  void err(std::size_t line, const std::string& msg) {
    errors.push_back("line " + std::to_string(line) + ": " + msg);
  }
};

bool parse_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoull(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size() && s[0] != '-';
}

bool parse_f64(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size() && std::isfinite(out);
}

const std::set<std::string>& external_file_keys() {
  static const std::set<std::string> keys{"a", "b", "c", "x0", "set"};
  return keys;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string line_search_name(LineSearchMode m) {
  switch (m) {
    case LineSearchMode::automatic: return "auto";
    case LineSearchMode::exact_quadratic: return "exact";
    case LineSearchMode::bisection: return "bisection";
  }
  return "auto";
}

LineSearchMode line_search_from_name(const std::string& name) {
  if (name == "auto") return LineSearchMode::automatic;
  if (name == "exact") return LineSearchMode::exact_quadratic;
  if (name == "bisection") return LineSearchMode::bisection;
  throw param_error("unknown line_search mode: " + name);
}

RunConfig parse_config(const std::string& text) {
  ParseState st;
  std::map<std::string, RawEntry> problem_raw, output_raw;
  std::map<std::size_t, std::map<std::string, RawEntry>> solver_raw;

  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;

    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      st.err(lineno, "expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      st.err(lineno, "empty key or value");
      continue;
    }

    if (key.rfind("problem.", 0) == 0) {
      const std::string field = key.substr(8);
      if (problem_raw.count(field))
        st.err(lineno, "duplicate key '" + key + "'");
      else
        problem_raw[field] = {value, lineno};
    } else if (key.rfind("solver[", 0) == 0) {
      const std::size_t close = key.find(']');
      if (close == std::string::npos || close + 1 >= key.size() ||
          key[close + 1] != '.') {
        st.err(lineno, "malformed solver key '" + key + "'");
        continue;
      }
      std::uint64_t idx = 0;
      if (!parse_u64(key.substr(7, close - 7), idx) || idx > 1000) {
        st.err(lineno, "bad solver index in '" + key + "'");
        continue;
      }
      const std::string field = key.substr(close + 2);
      auto& entry = solver_raw[idx];
      if (entry.count(field))
        st.err(lineno, "duplicate key '" + key + "'");
      else
        entry[field] = {value, lineno};
    } else if (key.rfind("output.", 0) == 0) {
      const std::string field = key.substr(7);
      if (output_raw.count(field))
        st.err(lineno, "duplicate key '" + key + "'");
      else
        output_raw[field] = {value, lineno};
    } else {
      st.err(lineno, "unknown key '" + key + "'");
    }
  }

  RunConfig cfg;

  // ---- problem section ----
  auto pit = problem_raw.find("name");
  if (pit == problem_raw.end()) {
    st.errors.insert(st.errors.begin(), "missing required key problem.name");
  } else {
    cfg.problem.name = pit->second.value;
  }
  std::map<std::string, double> known_params;
  bool known_name = false;
  if (!cfg.problem.name.empty() && cfg.problem.name != "external") {
    try {
      known_params = bench_defaults(cfg.problem.name, false);
      known_name = true;
    } catch (const param_error&) {
      st.err(pit->second.line,
             "unknown problem name '" + cfg.problem.name + "'");
    }
  }
  const bool external = cfg.problem.name == "external";
  if (external) {
    known_params = {{"radius", 0.0}, {"n1", 0.0}, {"n2", 0.0}};
    known_name = true;
  }
  for (const auto& [field, raw] : problem_raw) {
    if (field == "name") continue;
    if (field == "seed") {
      if (!parse_u64(raw.value, cfg.problem.seed))
        st.err(raw.line, "problem.seed: expected a nonnegative integer, got '" +
                             raw.value + "'");
    } else if (field == "paper_scale") {
      if (raw.value == "true") cfg.problem.paper_scale = true;
      else if (raw.value == "false") cfg.problem.paper_scale = false;
      else
        st.err(raw.line, "problem.paper_scale: expected true or false");
    } else if (external && external_file_keys().count(field)) {
      cfg.problem.files[field] = raw.value;
    } else if (known_name && known_params.count(field)) {
      double v = 0.0;
      if (!parse_f64(raw.value, v))
        st.err(raw.line, "problem." + field + ": expected a number, got '" +
                             raw.value + "'");
      else
        cfg.problem.params[field] = v;
    } else if (known_name) {
      st.err(raw.line, "unknown key 'problem." + field + "' for problem '" +
                           cfg.problem.name + "'");
    }
  }

  // ---- solver sections ----
  if (!solver_raw.empty()) {
    const std::size_t count = solver_raw.rbegin()->first + 1;
    for (std::size_t i = 0; i < count; ++i)
      if (!solver_raw.count(i))
        st.errors.push_back("solver indices must be contiguous from 0; "
                            "missing solver[" + std::to_string(i) + "]");
    cfg.solvers.resize(count);
    for (auto& [idx, fields] : solver_raw) {
      SolverConfig& sc = cfg.solvers[idx];
      const std::string prefix = "solver[" + std::to_string(idx) + "].";
      for (const auto& [field, raw] : fields) {
        auto want_u64 = [&](std::size_t& out) {
          std::uint64_t v = 0;
          if (!parse_u64(raw.value, v))
            st.err(raw.line, prefix + field +
                                 ": expected a nonnegative integer, got '" +
                                 raw.value + "'");
          else
            out = static_cast<std::size_t>(v);
        };
        auto want_f64 = [&](double& out) {
          double v = 0.0;
          if (!parse_f64(raw.value, v))
            st.err(raw.line, prefix + field + ": expected a number, got '" +
                                 raw.value + "'");
          else
            out = v;
        };
        if (field == "algorithm") {
          try {
            sc.algorithm = algorithm_from_name(raw.value);
          } catch (const param_error& e) {
            st.err(raw.line, prefix + "algorithm: " + e.what());
          }
        } else if (field == "k") want_u64(sc.k);
        else if (field == "max_iter") want_u64(sc.max_iter);
        else if (field == "k_max") want_u64(sc.k_max);
        else if (field == "memory") want_u64(sc.memory);
        else if (field == "rel_change_tol") want_f64(sc.rel_change_tol);
        else if (field == "fw_gap_tol") want_f64(sc.fw_gap_tol);
        else if (field == "sigma") want_f64(sc.adapt_sigma);
        else if (field == "line_search") {
          try {
            sc.line_search = line_search_from_name(raw.value);
          } catch (const param_error& e) {
            st.err(raw.line, prefix + "line_search: " + e.what());
          }
        } else {
          st.err(raw.line, "unknown key '" + prefix + field + "'");
        }
      }
    }
  }

  // ---- output section ----
  for (const auto& [field, raw] : output_raw) {
    if (field == "dir") cfg.out_dir = raw.value;
    else if (field == "jobs") {
      std::uint64_t v = 0;
      if (!parse_u64(raw.value, v) || v == 0)
        st.err(raw.line, "output.jobs: expected a positive integer, got '" +
                             raw.value + "'");
      else
        cfg.jobs = static_cast<std::size_t>(v);
    } else {
      st.err(raw.line, "unknown key 'output." + field + "'");
    }
  }

  if (!st.errors.empty()) {
    std::string all = "invalid config:";
    for (const auto& e : st.errors) all += "\n  " + e;
    throw param_error(all);
  }
  return cfg;
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  out += "problem.name = " + c.problem.name + "\n";
  out += "problem.seed = " + std::to_string(c.problem.seed) + "\n";
  if (c.problem.paper_scale) out += "problem.paper_scale = true\n";
  for (const auto& [k, v] : c.problem.params)
    out += "problem." + k + " = " + fmt(v) + "\n";
  for (const auto& [k, v] : c.problem.files)
    out += "problem." + k + " = " + v + "\n";
  for (std::size_t i = 0; i < c.solvers.size(); ++i) {
    const SolverConfig& s = c.solvers[i];
    const std::string p = "solver[" + std::to_string(i) + "].";
    out += p + "algorithm = " + algorithm_name(s.algorithm) + "\n";
    out += p + "k = " + std::to_string(s.k) + "\n";
    out += p + "max_iter = " + std::to_string(s.max_iter) + "\n";
    out += p + "rel_change_tol = " + fmt(s.rel_change_tol) + "\n";
    out += p + "fw_gap_tol = " + fmt(s.fw_gap_tol) + "\n";
    out += p + "sigma = " + fmt(s.adapt_sigma) + "\n";
    out += p + "k_max = " + std::to_string(s.k_max) + "\n";
    if (s.memory != static_cast<std::size_t>(-1))
      out += p + "memory = " + std::to_string(s.memory) + "\n";
    out += p + "line_search = " + line_search_name(s.line_search) + "\n";
  }
  out += "output.dir = " + c.out_dir + "\n";
  out += "output.jobs = " + std::to_string(c.jobs) + "\n";
  return out;
}

namespace {

Problem build_external(const ProblemSpec& spec) {
  auto file = [&](const char* key) -> const std::string* {
    auto it = spec.files.find(key);
    return it == spec.files.end() ? nullptr : &it->second;
  };
  const std::string* pa = file("a");
  const std::string* pb = file("b");
  const std::string* pset = file("set");
  if (!pb || !pset)
    throw param_error("external problem requires problem.b and problem.set");

  Vector b = read_vector_file(*pb);
  std::shared_ptr<const LinearMap> map;
  std::size_t dim = b.size();
  if (pa) {
    Matrix a = read_matrix_file(*pa);
    if (a.rows() != b.size())
      throw param_error("external problem: rows(A) != length(b)");
    dim = a.cols();
    map = std::make_shared<DenseMap>(std::move(a));
  }

  Vector c;
  if (const std::string* pc = file("c")) {
    c = read_vector_file(*pc);
    if (c.size() != dim)
      throw param_error("external problem: length(c) != variable dimension");
  }

  auto param = [&](const char* key) -> double {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
      throw param_error(std::string("external problem: missing problem.") +
                        key);
    return it->second;
  };

  FeasibleSet set;
  if (*pset == "simplex") set = Simplex{dim};
  else if (*pset == "hypercube") set = Hypercube{dim};
  else if (*pset == "l1") {
    const double r = param("radius");
    if (!(r > 0.0)) throw param_error("external problem: radius must be > 0");
    set = L1Ball{dim, r};
  } else if (*pset == "spectrahedron") {
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(
        static_cast<double>(dim))));
    if (n * n != dim)
      throw param_error("external problem: spectrahedron needs a square "
                        "variable dimension");
    set = Spectrahedron{n};
  } else if (*pset == "nuclear") {
    const auto n1 = static_cast<std::size_t>(param("n1"));
    const auto n2 = static_cast<std::size_t>(param("n2"));
    const double r = param("radius");
    if (n1 * n2 != dim)
      throw param_error("external problem: n1*n2 != variable dimension");
    if (!(r > 0.0)) throw param_error("external problem: radius must be > 0");
    set = NuclearBall{n1, n2, r};
  } else {
    throw param_error("external problem: unsupported set '" + *pset + "'");
  }

  ContentHasher h;
  h.add(b);
  h.add(c);

  Problem prob;
  prob.name = "external";
  prob.objective = CompositeObjective(
      std::move(map), std::make_shared<QuadraticOuter>(std::move(b)),
      std::move(c), dim);
  prob.set = std::move(set);
  if (const std::string* px = file("x0")) {
    prob.x0 = read_vector_file(*px);
    if (prob.x0.size() != dim)
      throw param_error("external problem: length(x0) != variable dimension");
  }
  prob.content_hash = h.digest();
  return prob;
}

}  // namespace

Problem build_problem(const ProblemSpec& spec) {
  if (spec.name == "external") return build_external(spec);
  return make_bench_problem(spec.name, spec.seed, spec.paper_scale,
                            spec.params);
}

std::string solver_label(const RunConfig& c, std::size_t i) {
  const SolverConfig& s = c.solvers.at(i);
  std::string base = algorithm_name(s.algorithm);
  if (s.algorithm != Algorithm::fw && s.algorithm != Algorithm::away_fw &&
      s.algorithm != Algorithm::pairwise_fw)
    base += "_k" + std::to_string(s.k);
  for (std::size_t j = 0; j < i; ++j)
    if (solver_label(c, j) == base) return base + "_" + std::to_string(i);
  return base;
}

}  // namespace kfw
