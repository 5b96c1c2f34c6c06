#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "doctest.h"
#include "kfw/config.hpp"
#include "kfw/io.hpp"
#include "kfw/solvers.hpp"
#include "test_support.hpp"

using namespace kfw;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("kfw_io_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
  std::string write(const std::string& name, const std::string& text) const {
    const std::string p = path(name);
    std::ofstream out(p);
    out << text;
    return p;
  }
};

std::string error_text(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const param_error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("array format: exact values, column-major order") {
  TempDir td;
  const std::string p = td.write("a.mtx",
                                 "%%MatrixMarket matrix array real general\n"
                                 "% a comment line\n"
                                 "2 2\n"
                                 "1.5\n-2.25\n3\n4.5\n");
  const Matrix m = read_matrix_file(p);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  CHECK(m(0, 0) == 1.5);
  CHECK(m(1, 0) == -2.25);
  CHECK(m(0, 1) == 3.0);
  CHECK(m(1, 1) == 4.5);
}

TEST_CASE("coordinate format: densified with exact duplicates check") {
  TempDir td;
  const std::string p =
      td.write("c.mtx",
               "%%MatrixMarket matrix coordinate real general\n"
               "3 4 2\n"
               "2 1 -7.5\n"
               "3 4 0.25\n");
  const Matrix m = read_matrix_file(p);
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == 4);
  CHECK(m(1, 0) == -7.5);
  CHECK(m(2, 3) == 0.25);
  CHECK(m(0, 0) == 0.0);

  const std::string dup =
      td.write("dup.mtx",
               "%%MatrixMarket matrix coordinate real general\n"
               "3 4 2\n"
               "2 1 -7.5\n"
               "2 1 1.0\n");
  const std::string msg = error_text([&] { read_matrix_file(dup); });
  CHECK(msg.find("duplicate entry (2, 1)") != std::string::npos);
}

TEST_CASE("malformed inputs are rejected with location information") {
  TempDir td;
  CHECK_THROWS_AS(read_matrix_file(td.path("missing.mtx")), param_error);

  const std::string bad_banner =
      td.write("bb.mtx", "%%NotMatrixMarket thing\n2 2\n1\n2\n3\n4\n");
  CHECK_THROWS_AS(read_matrix_file(bad_banner), param_error);

  const std::string complex_field = td.write(
      "cf.mtx", "%%MatrixMarket matrix array complex general\n1 1\n1 0\n");
  CHECK_THROWS_AS(read_matrix_file(complex_field), param_error);

  const std::string short_data = td.write(
      "sd.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n");
  const std::string msg = error_text([&] { read_matrix_file(short_data); });
  CHECK(msg.find("expected 4 values, found 3") != std::string::npos);

  const std::string non_finite = td.write(
      "nf.mtx", "%%MatrixMarket matrix array real general\n1 1\nnan\n");
  CHECK_THROWS_AS(read_matrix_file(non_finite), param_error);

  const std::string out_of_range =
      td.write("oor.mtx",
               "%%MatrixMarket matrix coordinate real general\n"
               "2 2 1\n"
               "3 1 5.0\n");
  CHECK_THROWS_AS(read_matrix_file(out_of_range), param_error);
}

TEST_CASE("vectors: row and column shapes accepted, matrices rejected") {
  TempDir td;
  const std::string col = td.write(
      "col.mtx", "%%MatrixMarket matrix array real general\n3 1\n1\n2\n3\n");
  const Vector v = read_vector_file(col);
  REQUIRE(v.size() == 3);
  CHECK(v[1] == 2.0);

  const std::string row = td.write(
      "row.mtx", "%%MatrixMarket matrix array real general\n1 3\n1\n2\n3\n");
  const Vector w = read_vector_file(row);
  REQUIRE(w.size() == 3);
  CHECK(w[2] == 3.0);

  const std::string sq = td.write(
      "sq.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  CHECK_THROWS_AS(read_vector_file(sq), param_error);
}

TEST_CASE("write/read round trips preserve every bit") {
  TempDir td;
  Rng rng(107);
  Matrix m = testkit::gaussian_matrix(rng, 7, 5);
  write_matrix_array(td.path("m.mtx"), m);
  const Matrix m2 = read_matrix_file(td.path("m.mtx"));
  REQUIRE(m2.rows() == 7);
  REQUIRE(m2.cols() == 5);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(m(i, j) == m2(i, j));

  Vector v = testkit::gaussian_vector(rng, 9);
  write_vector_array(td.path("v.mtx"), v);
  const Vector v2 = read_vector_file(td.path("v.mtx"));
  REQUIRE(v2.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) CHECK(v[i] == v2[i]);

  std::vector<CoordEntry> entries{{0, 2, 1.125}, {4, 0, -9.5}, {2, 3, 0.75}};
  write_matrix_coordinate(td.path("s.mtx"), 5, 4, entries);
  const Matrix s = read_matrix_file(td.path("s.mtx"));
  CHECK(s(0, 2) == 1.125);
  CHECK(s(4, 0) == -9.5);
  CHECK(s(2, 3) == 0.75);
  double sum = 0.0;
  for (std::size_t i = 0; i < 20; ++i) sum += std::fabs(s.data()[i]);
  CHECK(sum == 1.125 + 9.5 + 0.75);
}

TEST_CASE("config: minimal text fills documented defaults") {
  const RunConfig c = parse_config(
      "problem.name = lasso\n"
      "solver[0].algorithm = kfw\n"
      "solver[0].k = 20\n");
  CHECK(c.problem.name == "lasso");
  CHECK(c.problem.seed == 1);
  CHECK_FALSE(c.problem.paper_scale);
  CHECK(c.problem.params.empty());
  REQUIRE(c.solvers.size() == 1);
  CHECK(c.solvers[0].algorithm == Algorithm::kfw);
  CHECK(c.solvers[0].k == 20);
  CHECK(c.solvers[0].max_iter == 1000);
  CHECK(c.solvers[0].rel_change_tol == 1e-6);
  CHECK(c.solvers[0].fw_gap_tol == 0.0);
  CHECK(c.out_dir == ".");
  CHECK(c.jobs == 1);
}

TEST_CASE("config: type errors carry the key and the line number") {
  const std::string msg = error_text([] {
    parse_config(
        "problem.name = lasso\n"
        "solver[0].algorithm = kfw\n"
        "solver[0].k = abc\n");
  });
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("solver[0].k") != std::string::npos);
  CHECK(msg.find("abc") != std::string::npos);
}

TEST_CASE("config: every problem is reported, not just the first") {
  const std::string msg = error_text([] {
    parse_config(
        "problem.name = lasso\n"
        "problem.bogus = 3\n"
        "solver[0].algorithm = warp_drive\n"
        "solver[0].speed = 9\n"
        "mystery = 1\n"
        "output.jobs = 0\n");
  });
  CHECK(msg.find("problem.bogus") != std::string::npos);
  CHECK(msg.find("algorithm") != std::string::npos);
  CHECK(msg.find("solver[0].speed") != std::string::npos);
  CHECK(msg.find("mystery") != std::string::npos);
  CHECK(msg.find("output.jobs") != std::string::npos);
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("line 5") != std::string::npos);
}

TEST_CASE("config: solver indices must be contiguous") {
  const std::string msg = error_text([] {
    parse_config(
        "problem.name = lasso\n"
        "solver[0].algorithm = fw\n"
        "solver[2].algorithm = kfw\n");
  });
  CHECK(msg.find("solver[1]") != std::string::npos);
}

TEST_CASE("config: serialization round-trips exactly") {
  const std::string text =
      "problem.name = hypercube\n"
      "problem.seed = 9\n"
      "problem.n = 30   # comment after value\n"
      "problem.n_fractional = 7\n"
      "solver[0].algorithm = lkfw\n"
      "solver[0].k = 11\n"
      "solver[0].memory = 5\n"
      "solver[0].rel_change_tol = 1e-8\n"
      "solver[1].algorithm = fw\n"
      "solver[1].line_search = bisection\n"
      "output.dir = results\n"
      "output.jobs = 4\n";
  const RunConfig c1 = parse_config(text);
  const RunConfig c2 = parse_config(serialize_config(c1));
  CHECK(c1 == c2);
  CHECK(c2.problem.params.at("n") == 30.0);
  CHECK(c2.solvers[0].memory == 5);
  CHECK(c2.solvers[1].line_search == LineSearchMode::bisection);
}

TEST_CASE("config: duplicate keys rejected") {
  CHECK_THROWS_AS(parse_config("problem.name = lasso\n"
                               "problem.seed = 1\n"
                               "problem.seed = 2\n"
                               "solver[0].algorithm = fw\n"),
                  param_error);
}

TEST_CASE("solver labels are short and unique") {
  RunConfig c;
  c.problem.name = "lasso";
  SolverConfig a;
  a.algorithm = Algorithm::kfw;
  a.k = 20;
  SolverConfig b = a;
  SolverConfig f;
  f.algorithm = Algorithm::fw;
  c.solvers = {a, b, f};
  CHECK(solver_label(c, 0) == "kfw_k20");
  CHECK(solver_label(c, 1) == "kfw_k20_1");
  CHECK(solver_label(c, 2) == "fw");
}

TEST_CASE("line search names round-trip") {
  for (auto m : {LineSearchMode::automatic, LineSearchMode::exact_quadratic,
                 LineSearchMode::bisection})
    CHECK(line_search_from_name(line_search_name(m)) == m);
  CHECK_THROWS_AS(line_search_from_name("newton"), param_error);
}

TEST_CASE("external problems: files to solution end-to-end") {
  TempDir td;
  Rng rng(109);
  const Matrix a = testkit::gaussian_matrix(rng, 6, 8);
  Vector xs(8);
  xs[1] = 0.6;
  xs[5] = -0.4;
  const Vector b = matvec(a, xs);
  Vector c(8);
  write_matrix_array(td.path("a.mtx"), a);
  write_vector_array(td.path("b.mtx"), b);
  write_vector_array(td.path("c.mtx"), c);
  Vector x0(8);
  x0[0] = 1.0;
  write_vector_array(td.path("x0.mtx"), x0);

  const RunConfig cfg = parse_config(
      "problem.name = external\n"
      "problem.a = " + td.path("a.mtx") + "\n" +
      "problem.b = " + td.path("b.mtx") + "\n" +
      "problem.c = " + td.path("c.mtx") + "\n" +
      "problem.x0 = " + td.path("x0.mtx") + "\n" +
      "problem.set = l1\n"
      "problem.radius = 1\n"
      "solver[0].algorithm = kfw\n"
      "solver[0].k = 2\n");
  const Problem prob = build_problem(cfg.problem);
  CHECK(prob.name == "external");
  CHECK(ambient_dim(prob.set) == 8);
  CHECK(testkit::max_abs_diff(prob.start(), x0) == 0.0);
  // ||x_s||_1 = 1 exactly, so the optimum value is 0; the gradient vanishes
  // there, which rules out a finite landing — expect a 1/t tail instead
  const SolveTrace tr = solve(prob, cfg.solvers[0]);
  CHECK(tr.objective <= 1e-3);
  CHECK(contains(prob.set, tr.solution, 1e-9));

  // missing mandatory pieces
  ProblemSpec broken;
  broken.name = "external";
  broken.files["set"] = "simplex";
  CHECK_THROWS_AS(build_problem(broken), param_error);
}
