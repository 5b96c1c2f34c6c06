#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "kfw/bench.hpp"
#include "kfw/certificates.hpp"
#include "kfw/eig.hpp"
#include "kfw/solvers.hpp"
#include "test_support.hpp"

using namespace kfw;

namespace {

double rel_err(const Vector& a, const Vector& b) {
  Vector d = a;
  axpy(-1.0, b, d);
  return norm2(d) / std::max(1e-300, norm2(b));
}

}  // namespace

TEST_CASE("generators are pure functions of their arguments") {
  for (const char* name : {"lasso", "svm", "group_lasso", "matrix_completion",
                           "cone_polygon", "hypercube", "spectrahedron",
                           "nuclear"}) {
    CAPTURE(name);
    const Problem a = make_bench_problem(name, 42, false, {});
    const Problem b = make_bench_problem(name, 42, false, {});
    CHECK(a.content_hash == b.content_hash);
    CHECK(a.content_hash != 0);
    Rng rng(7);
    const Vector probe = sample_feasible(a.set, rng);
    CHECK(a.objective.value(probe) == b.objective.value(probe));

    const Problem c = make_bench_problem(name, 43, false, {});
    if (std::string(name) != "cone_polygon")  // cone ignores the seed
      CHECK(a.content_hash != c.content_hash);
  }
}

TEST_CASE("overrides replace parameters; unknown keys and names rejected") {
  const Problem p = make_bench_problem("lasso", 1, false, {{"n", 50}, {"s", 5}});
  CHECK(ambient_dim(p.set) == 50);
  CHECK(*p.planted_r == 5);
  CHECK_THROWS_AS(make_bench_problem("lasso", 1, false, {{"bogus", 1.0}}),
                  param_error);
  CHECK_THROWS_AS(make_bench_problem("no_such_problem", 1, false, {}),
                  param_error);
  CHECK_THROWS_AS(bench_defaults("no_such_problem", false), param_error);

  // paper scale selects the full-size configuration
  CHECK(bench_defaults("lasso", false).at("m") == 200);
  CHECK(bench_defaults("lasso", true).at("m") == 2000);
}

TEST_CASE("lasso: noiseless plant is an exact minimizer on the boundary") {
  const Problem p = gen_lasso(40, 80, 6, 0.0, 5);
  REQUIRE(p.f_star.has_value());
  REQUIRE(p.x_star.has_value());
  CHECK(*p.f_star == 0.0);
  CHECK(p.objective.value(*p.x_star) == 0.0);
  CHECK(contains(p.set, *p.x_star, 1e-12));
  CHECK(*p.planted_r == 6);
  CHECK(p.suggested_k == 6);
  // radius is exactly the plant's l1 norm: pushing any coordinate out fails
  double l1 = 0.0;
  for (auto v : *p.x_star) l1 += std::fabs(v);
  CHECK(l1 == doctest::Approx(std::get<L1Ball>(p.set).radius).epsilon(1e-15));

  const Problem noisy = gen_lasso(40, 80, 6, 0.1, 5);
  CHECK_FALSE(noisy.f_star.has_value());
}

TEST_CASE("svm: factorized objective equals the kernel quadratic form") {
  const SvmInstance inst = gen_svm_instance(40, 8, 11, 10.0);
  const std::size_t n = 40;
  Rng rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    const Vector lam = sample_feasible(inst.problem.set, rng);
    // direct evaluation of lambda' Q lambda from features and labels
    double direct = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double ip = 0.0;
        for (std::size_t f = 0; f < inst.features.rows(); ++f)
          ip += inst.features(f, i) * inst.features(f, j);
        double q = inst.labels[i] * inst.labels[j] * (ip + 1.0) * (ip + 1.0);
        if (i == j) q += 1.0 / inst.c_param;
        direct += lam[i] * q * lam[j];
      }
    const double through = inst.problem.objective.value(lam);
    CHECK(std::abs(through - direct) <= 1e-9 * std::max(1.0, direct));
  }
}

TEST_CASE("svm: learned dual weights separate the training classes") {
  const SvmInstance inst = gen_svm_instance(100, 10, 3, 1000.0);
  SolverConfig cfg;
  cfg.algorithm = Algorithm::kfw;
  cfg.k = inst.problem.suggested_k;
  cfg.max_iter = 300;
  const SolveTrace tr = solve(inst.problem, cfg);
  const Vector& lam = tr.solution;

  const std::size_t n = 100;
  std::vector<double> score(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      double ip = 0.0;
      for (std::size_t f = 0; f < inst.features.rows(); ++f)
        ip += inst.features(f, i) * inst.features(f, j);
      score[j] += lam[i] * inst.labels[i] * (ip + 1.0) * (ip + 1.0);
    }
  double min_pos = 1e300, max_neg = -1e300;
  for (std::size_t j = 0; j < n; ++j) {
    if (inst.labels[j] > 0)
      min_pos = std::min(min_pos, score[j]);
    else
      max_neg = std::max(max_neg, score[j]);
  }
  // decision scores of the two classes separate (positive margin around the
  // midpoint threshold)
  CHECK(min_pos > max_neg);

  CHECK_THROWS_AS(gen_svm_instance(41, 8, 1, 10.0), param_error);
  CHECK_THROWS_AS(gen_svm_instance(40, 8, 1, 0.0), param_error);
}

TEST_CASE("group lasso: one group per column, exact plant") {
  const Problem p = gen_group_lasso(4, 30, 8, 3, 0.0, 17);
  const auto& gb = std::get<GroupNormBall>(p.set);
  REQUIRE(gb.groups.size() == 8);
  // group j holds the row-major positions of column j
  std::vector<bool> seen(32, false);
  for (std::size_t j = 0; j < 8; ++j) {
    REQUIRE(gb.groups[j].size() == 4);
    for (std::size_t r = 0; r < 4; ++r) {
      CHECK(gb.groups[j][r] == r * 8 + j);
      CHECK_FALSE(seen[gb.groups[j][r]]);
      seen[gb.groups[j][r]] = true;
    }
  }
  CHECK(p.objective.value(*p.x_star) == 0.0);
  CHECK(contains(p.set, *p.x_star, 1e-9));
  CHECK(*p.planted_r == 3);

  // live column count matches the plant
  const auto live = sparsity_measure(p.set, *p.x_star, 1e-9);
  CHECK(live.r == 3);
}

TEST_CASE("matrix completion: mask size, exact plant, low-rank recovery") {
  const Problem p = gen_matrix_completion(30, 40, 2, 0.45, 23);
  CHECK(p.objective.value(*p.x_star) == 0.0);
  CHECK(*p.f_star == 0.0);
  CHECK(contains(p.set, *p.x_star, 1e-9));

  // f(x* + ones) counts the observed entries: each contributes exactly 1
  Vector shifted = *p.x_star;
  for (auto& v : shifted) v += 1.0;
  const double count = p.objective.value(shifted);
  CHECK(count == static_cast<double>(std::llround(0.45 * 30 * 40)));

  // the gradient vanishes at the noiseless optimum, so there is no linear
  // rate here; expect steady but sublinear progress toward the plant
  SolverConfig cfg;
  cfg.algorithm = Algorithm::kfw;
  cfg.k = 2;
  cfg.max_iter = 500;
  cfg.rel_change_tol = 1e-9;
  const SolveTrace tr = solve(p, cfg);
  CHECK(rel_err(tr.solution, *p.x_star) < 0.1);
}

TEST_CASE("cone polygon: barycentric start and optimum") {
  const Problem p = gen_cone_polygon(12);
  CHECK(ambient_dim(p.set) == 13);
  CHECK(contains(p.set, p.start(), 1e-12));
  // start encodes the 3-d point (0, 0, 0.1); objective x^2 + y^2 + z
  CHECK(p.objective.value(p.start()) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(p.objective.value(*p.x_star) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(*p.f_star == 0.0);
  CHECK(fw_gap(p.objective, p.set, *p.x_star) <= 1e-10);
  CHECK_THROWS_AS(gen_cone_polygon(2), param_error);
}

TEST_CASE("hypercube projection: clamp optimum with analytic value") {
  const Problem p = gen_hypercube_projection(20, 6, 29);
  CHECK(*p.f_star == 14.0);  // (2-1)^2 per saturated coordinate
  CHECK(p.objective.value(*p.x_star) ==
        doctest::Approx(14.0).epsilon(1e-14));
  CHECK(contains(p.set, *p.x_star, 0.0));
  CHECK(*p.planted_r == 64);
  CHECK(p.suggested_k == 7);
  CHECK(fw_gap(p.objective, p.set, *p.x_star) <= 1e-10);

  SolverConfig cfg;
  cfg.algorithm = Algorithm::fw;
  cfg.max_iter = 50;
  const SolveTrace tr = solve(p, cfg);
  CHECK(tr.objective >= 14.0 - 1e-12);
}

TEST_CASE("planted spectrahedron: minimizer, gap, and certificates line up") {
  const Problem p = gen_spectrahedron_planted(20, 2, 0.5, 31);
  REQUIRE(p.x_star.has_value());
  CHECK(contains(p.set, *p.x_star, 1e-9));
  CHECK(p.objective.value(*p.x_star) ==
        doctest::Approx(*p.f_star).epsilon(1e-10));
  CHECK(fw_gap(p.objective, p.set, *p.x_star) <= 1e-8);

  const auto info = sparsity_measure(p.set, *p.x_star, 1e-6);
  CHECK(info.r == 2);
  const Vector grad = p.objective.gradient(*p.x_star);
  CHECK(delta_gap(p.set, grad, 2) == doctest::Approx(0.5).epsilon(1e-8));

  CHECK_THROWS_AS(gen_spectrahedron_planted(10, 0, 0.5, 1), param_error);
  CHECK_THROWS_AS(gen_spectrahedron_planted(10, 2, 3.0, 1), param_error);
}

TEST_CASE("planted nuclear instance: minimizer, gap, and certificates") {
  const Problem p = gen_nuclear_planted(15, 20, 3, 0.4, 1.2, 37);
  REQUIRE(p.x_star.has_value());
  CHECK(contains(p.set, *p.x_star, 1e-9));
  CHECK(p.objective.value(*p.x_star) ==
        doctest::Approx(*p.f_star).epsilon(1e-10));
  CHECK(fw_gap(p.objective, p.set, *p.x_star) <= 1e-8);

  const auto info = sparsity_measure(p.set, *p.x_star, 1e-6);
  CHECK(info.r == 3);
  const Vector grad = p.objective.gradient(*p.x_star);
  CHECK(delta_gap(p.set, grad, 3) == doctest::Approx(0.4).epsilon(1e-8));

  // the plant saturates the nuclear norm budget
  const Svd sv = svd(reshape(*p.x_star, 15, 20));
  double nuc = 0.0;
  for (std::size_t i = 0; i < sv.sigma.size(); ++i) nuc += sv.sigma[i];
  CHECK(nuc == doctest::Approx(1.2).epsilon(1e-9));
}
