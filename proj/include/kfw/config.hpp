#pragma once

// Experiment configuration: a structured key=value text format with
// problem.*, solver[i].*, and output.* sections. Parsing validates every
// key and value and reports all errors at once with line numbers;
// serialization round-trips.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kfw/problem.hpp"
#include "kfw/solvers.hpp"

namespace kfw {

struct ProblemSpec {
  std::string name;  // benchmark generator name, or "external"
  std::uint64_t seed = 1;
  bool paper_scale = false;
  // numeric generator parameters the config overrode (others stay default)
  std::map<std::string, double> params;
  // string-valued keys (external problems): a, b, c, x0 = file paths;
  // set = simplex | l1 | hypercube | spectrahedron | nuclear
  std::map<std::string, std::string> files;

  bool operator==(const ProblemSpec&) const = default;
};

struct RunConfig {
  ProblemSpec problem;
  std::vector<SolverConfig> solvers;
  std::string out_dir = ".";
  std::size_t jobs = 1;

  bool operator==(const RunConfig&) const = default;
};

// Parses and fully validates; throws param_error listing every problem found
// (one per line, each prefixed with its source line number).
RunConfig parse_config(const std::string& text);

// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

// Instantiates the problem a spec describes (benchmark generator or external
// files). Throws param_error for bad specs, including file I/O problems.
Problem build_problem(const ProblemSpec& spec);

// Short unique file label for solver i of the config ("kfw_k20", ...).
std::string solver_label(const RunConfig& c, std::size_t i);

std::string line_search_name(LineSearchMode m);
LineSearchMode line_search_from_name(const std::string& name);

}  // namespace kfw
