// Experiment runner: parse a key=value config, build the problem and solver
// stack, execute (optionally in parallel across solvers), and emit per-
// iteration CSV traces plus a JSON summary with certificates.
//
// Exit codes: 0 success, 1 configuration/input error, 2 numerical failure.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kfw/bench.hpp"
#include "kfw/certificates.hpp"
#include "kfw/config.hpp"
#include "kfw/errors.hpp"
#include "kfw/io.hpp"
#include "kfw/kernels.hpp"
#include "kfw/solvers.hpp"

namespace {

using nlohmann::json;

struct CliOptions {
  std::string config_path;
  std::string out_dir;           // overrides output.dir when nonempty
  std::size_t jobs = 0;          // overrides output.jobs when nonzero
  std::optional<std::uint64_t> seed;
  bool paper_scale = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kfw::param_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

kfw::RunConfig load_config(const CliOptions& opt) {
  kfw::RunConfig cfg = kfw::parse_config(read_file(opt.config_path));
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (opt.jobs) cfg.jobs = opt.jobs;
  if (opt.seed) cfg.problem.seed = *opt.seed;
  if (opt.paper_scale) cfg.problem.paper_scale = true;
  return cfg;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(const std::string& path, const kfw::SolveTrace& tr) {
  std::ofstream out(path);
  if (!out) throw kfw::param_error("cannot write trace file: " + path);
  out << "iter,elapsed_s,objective,fw_gap,rel_change,k_used,support_size,"
         "kloo_s,kds_s\n";
  for (const auto& r : tr.iterations) {
    out << r.iter << ',' << num(r.elapsed_s) << ',' << num(r.objective) << ','
        << num(r.fw_gap) << ',' << num(r.rel_change) << ',' << r.k_used << ','
        << r.support_size << ',' << num(r.kloo_s) << ',' << num(r.kds_s)
        << '\n';
  }
  if (!out) throw kfw::param_error("write failed: " + path);
}

json problem_json(const kfw::RunConfig& cfg, const kfw::Problem& prob) {
  return json{{"name", prob.name},
              {"family", kfw::set_family_name(prob.set)},
              {"dim", kfw::ambient_dim(prob.set)},
              {"seed", cfg.problem.seed},
              {"paper_scale", cfg.problem.paper_scale},
              {"hash", hash_hex(prob.content_hash)}};
}

json solver_json(const kfw::SolverConfig& sc) {
  return json{{"algorithm", kfw::algorithm_name(sc.algorithm)},
              {"k", sc.k},
              {"max_iter", sc.max_iter},
              {"rel_change_tol", sc.rel_change_tol},
              {"fw_gap_tol", sc.fw_gap_tol},
              {"line_search", kfw::line_search_name(sc.line_search)}};
}

json certificate_json(const kfw::Certificate& c) {
  json j{{"fw_gap", c.fw_gap},
         {"sparsity_r", c.sparsity.r},
         {"sparsity_count", c.sparsity.count},
         {"gamma", c.gamma},
         {"smoothness", c.smoothness},
         {"diameter", c.diameter}};
  j["delta"] = c.delta ? json(*c.delta) : json();
  j["t_bound"] = c.t_bound ? json(*c.t_bound) : json();
  return j;
}

struct RunOutcome {
  std::string label;
  json summary;
  bool numeric_failure = false;
};

// Executes solver i on the shared problem and writes its trace file.
RunOutcome run_one(const kfw::RunConfig& cfg, const kfw::Problem& prob,
                   std::size_t i, bool with_certificate) {
  RunOutcome out;
  out.label = kfw::solver_label(cfg, i);
  json s;
  s["solver"] = solver_json(cfg.solvers[i]);
  s["label"] = out.label;
  try {
    const kfw::SolveTrace tr = kfw::solve(prob, cfg.solvers[i]);
    const std::string trace_path =
        (std::filesystem::path(cfg.out_dir) / (out.label + ".trace.csv"))
            .string();
    write_trace_csv(trace_path, tr);
    s["trace"] = out.label + ".trace.csv";
    s["final_objective"] = tr.objective;
    s["iterations"] = tr.iterations.size() - 1;
    s["converged"] = tr.converged;
    s["stop_reason"] = tr.stop_reason;
    s["total_seconds"] = tr.total_seconds;
    s["kloo_seconds"] = tr.kloo_seconds;
    s["kds_seconds"] = tr.kds_seconds;
    s["kloo_kds_ratio"] = tr.kds_seconds > 0.0
                              ? json(tr.kloo_seconds / tr.kds_seconds)
                              : json();
    if (with_certificate)
      s["certificate"] =
          certificate_json(kfw::certify(prob, tr.solution, 1e-6, 200));
  } catch (const kfw::param_error& e) {
    s["error"] = e.what();
    s["error_kind"] = "param";
  } catch (const std::exception& e) {
    s["error"] = e.what();
    s["error_kind"] = "numeric";
    out.numeric_failure = true;
  }
  out.summary = std::move(s);
  return out;
}

int run_solvers(const kfw::RunConfig& cfg, std::size_t solver_count,
                bool with_certificate) {
  if (cfg.solvers.empty())
    throw kfw::param_error("config declares no solvers");
  const std::size_t n = std::min(solver_count, cfg.solvers.size());
  std::filesystem::create_directories(cfg.out_dir);
  const kfw::Problem prob = kfw::build_problem(cfg.problem);
  prob.objective.smoothness();  // warm the cache before sharing across threads

  std::vector<RunOutcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      outcomes[i] = run_one(cfg, prob, i, with_certificate);
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.jobs, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  json summary;
  summary["problem"] = problem_json(cfg, prob);
  summary["runs"] = json::array();
  bool failed = false;
  for (auto& o : outcomes) {
    summary["runs"].push_back(std::move(o.summary));
    failed = failed || o.numeric_failure;
  }
  std::ofstream out(std::filesystem::path(cfg.out_dir) / "summary.json");
  out << summary.dump(2) << '\n';
  std::cout << summary.dump(2) << std::endl;
  return failed ? 2 : 0;
}

int cmd_certify(const kfw::RunConfig& cfg) {
  if (cfg.solvers.empty())
    throw kfw::param_error("certify needs one solver in the config");
  std::filesystem::create_directories(cfg.out_dir);
  const kfw::Problem prob = kfw::build_problem(cfg.problem);
  const kfw::SolveTrace tr = kfw::solve(prob, cfg.solvers[0]);
  const std::string label = kfw::solver_label(cfg, 0);
  write_trace_csv(
      (std::filesystem::path(cfg.out_dir) / (label + ".trace.csv")).string(),
      tr);
  const kfw::Certificate cert = kfw::certify(prob, tr.solution);

  json j;
  j["problem"] = problem_json(cfg, prob);
  j["solver"] = solver_json(cfg.solvers[0]);
  j["final_objective"] = tr.objective;
  j["certificate"] = certificate_json(cert);
  std::ofstream out(std::filesystem::path(cfg.out_dir) / "certificate.json");
  out << j.dump(2) << '\n';
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_gen(const kfw::RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const kfw::Problem prob = kfw::build_problem(cfg.problem);
  const fs::path dir(cfg.out_dir);
  std::vector<std::string> written;

  const auto* quad =
      dynamic_cast<const kfw::QuadraticOuter*>(&prob.objective.outer());
  if (quad) {
    kfw::write_vector_array((dir / "b.mtx").string(), quad->b());
    written.push_back("b.mtx");
  }
  const kfw::LinearMap& map = prob.objective.map();
  if (const auto* dense = dynamic_cast<const kfw::DenseMap*>(&map)) {
    kfw::write_matrix_array((dir / "A.mtx").string(), dense->matrix());
    written.push_back("A.mtx");
  } else if (const auto* mask = dynamic_cast<const kfw::EntryMaskMap*>(&map)) {
    // observed entries as a coordinate matrix over the variable's shape
    const auto* ball = std::get_if<kfw::NuclearBall>(&prob.set);
    const std::size_t cols = ball ? ball->n2 : mask->cols();
    std::vector<kfw::CoordEntry> entries(mask->mask().size());
    for (std::size_t t = 0; t < entries.size(); ++t) {
      const std::size_t flat = mask->mask()[t];
      entries[t] = {flat / cols, flat % cols, quad ? quad->b()[t] : 0.0};
    }
    kfw::write_matrix_coordinate((dir / "observations.mtx").string(),
                                 ball ? ball->n1 : 1, cols, entries);
    written.push_back("observations.mtx");
  } else if (const auto* rm =
                 dynamic_cast<const kfw::RightMultiplyMap*>(&map)) {
    kfw::write_matrix_array((dir / "X.mtx").string(), rm->factor());
    written.push_back("X.mtx");
  }
  if (prob.objective.has_linear_term()) {
    kfw::write_vector_array((dir / "c.mtx").string(),
                            prob.objective.linear_term());
    written.push_back("c.mtx");
  }
  if (prob.x0.size()) {
    kfw::write_vector_array((dir / "x0.mtx").string(), prob.x0);
    written.push_back("x0.mtx");
  }

  std::string manifest;
  manifest += "problem.name = " + cfg.problem.name + "\n";
  manifest += "problem.seed = " + std::to_string(cfg.problem.seed) + "\n";
  if (cfg.problem.name != "external")
    for (const auto& [k, v] :
         [&] {
           auto d = kfw::bench_defaults(cfg.problem.name,
                                        cfg.problem.paper_scale);
           for (const auto& [pk, pv] : cfg.problem.params) d[pk] = pv;
           return d;
         }())
      manifest += "problem." + k + " = " + num(v) + "\n";
  manifest += "family = " + kfw::set_family_name(prob.set) + "\n";
  manifest += "dim = " + std::to_string(kfw::ambient_dim(prob.set)) + "\n";
  manifest += "hash = " + hash_hex(prob.content_hash) + "\n";
  for (const auto& f : written) manifest += "file = " + f + "\n";
  std::ofstream out(dir / "manifest.txt");
  out << manifest;
  if (!out) throw kfw::param_error("cannot write manifest");
  std::cout << manifest;
  return 0;
}

void add_common(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path, "config file path")
      ->required();
  cmd->add_option("--out", opt.out_dir, "output directory (overrides config)");
  cmd->add_option("--jobs", opt.jobs, "parallel solver runs");
  std::uint64_t* seed_slot = nullptr;
  (void)seed_slot;
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&opt](std::uint64_t s) { opt.seed = s; },
      "override the problem seed");
  cmd->add_flag("--paper-scale", opt.paper_scale,
                "use full-size problem configurations");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projection-free constrained optimization experiment runner"};
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* run = app.add_subcommand("run", "run the first configured solver");
  CLI::App* compare =
      app.add_subcommand("compare", "run every configured solver");
  CLI::App* certify = app.add_subcommand(
      "certify", "solve, then emit solution certificates");
  CLI::App* gen = app.add_subcommand("gen", "write the problem data to disk");
  for (CLI::App* cmd : {run, compare, certify, gen}) add_common(cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  try {
    const kfw::RunConfig cfg = load_config(opt);
    if (run->parsed()) return run_solvers(cfg, 1, true);
    if (compare->parsed())
      return run_solvers(cfg, cfg.solvers.size(), true);
    if (certify->parsed()) return cmd_certify(cfg);
    return cmd_gen(cfg);
  } catch (const kfw::param_error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << std::endl;
    return 2;
  }
}
