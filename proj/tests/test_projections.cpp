#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "doctest.h"
#include "kfw/projections.hpp"
#include "projection_oracles.hpp"
#include "test_support.hpp"

using namespace kfw;
using namespace projkit;

// The independent oracle route (Dykstra's alternating algorithm composed from
// first-principles sub-projections) lives in projection_oracles.hpp and is
// shared with the acceptance gate.

TEST_CASE("project_simplex: closed-form examples") {
  Vector z1(3, 0.5);
  Vector p1 = project_simplex(z1);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(p1[i] == doctest::Approx(1.0 / 3).epsilon(1e-12));

  Vector z2(std::vector<double>{2, 0, 0});
  Vector p2 = project_simplex(z2);
  CHECK(p2[0] == doctest::Approx(1.0));
  CHECK(p2[1] == doctest::Approx(0.0));
  CHECK_THROWS(project_simplex(Vector()));
}

TEST_CASE("project_simplex matches the Dykstra oracle on random inputs") {
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector z = testkit::gaussian_vector(rng, 12);
    const Vector got = project_simplex(z);
    const Vector want = dykstra(
        z, clip_nonneg,
        [&](const Vector& v) { return to_hyperplane(v, ones(12), 1.0); });
    CHECK(testkit::max_abs_diff(got, want) < 1e-7);
  }
}

TEST_CASE("project_capped_simplex: examples and oracle") {
  Vector a = project_capped_simplex(Vector(std::vector<double>{0.2, 0.3}));
  CHECK(a[0] == doctest::Approx(0.2));
  CHECK(a[1] == doctest::Approx(0.3));
  Vector b = project_capped_simplex(Vector(std::vector<double>{0.8, 0.8}));
  CHECK(b[0] == doctest::Approx(0.5));
  CHECK(b[1] == doctest::Approx(0.5));
  Vector c = project_capped_simplex(Vector(std::vector<double>{-1.0, 0.4}));
  CHECK(c[0] == doctest::Approx(0.0));
  CHECK(c[1] == doctest::Approx(0.4));

  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector z = testkit::gaussian_vector(rng, 9);
    const Vector got = project_capped_simplex(z);
    const Vector want = dykstra(
        z, clip_nonneg,
        [&](const Vector& v) { return to_halfspace(v, ones(9), 1.0); });
    CHECK(testkit::max_abs_diff(got, want) < 1e-7);
  }
}

TEST_CASE("project_weighted_simplex matches the Dykstra oracle") {
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 8;
    Vector w(n);
    for (auto& t : w) t = rng.uniform(0.2, 3.0);
    const double rhs = rng.uniform(0.5, 2.0);
    const Vector t0 = testkit::gaussian_vector(rng, n);
    const Vector got = project_weighted_simplex(t0, w, rhs);
    const Vector want = dykstra(t0, clip_nonneg, [&](const Vector& v) {
      return to_hyperplane(v, w, rhs);
    });
    CHECK(testkit::max_abs_diff(got, want) < 1e-7);
    double acc = dot(w, got);
    CHECK(acc == doctest::Approx(rhs).epsilon(1e-9));
    for (std::size_t i = 0; i < n; ++i) CHECK(got[i] >= -1e-12);
  }
}

TEST_CASE("project_group_domain: identity, single-block analytic, oracle") {
  // feasible input unchanged
  std::vector<Vector> blocks = {Vector(std::vector<double>{0.1, 0.2}),
                                Vector(std::vector<double>{0.3})};
  GroupPoint gp = project_group_domain(0.2, blocks, 1.0);
  CHECK(gp.eta == doctest::Approx(0.2));
  CHECK(testkit::max_abs_diff(gp.blocks[0], blocks[0]) < 1e-12);

  // one block of norm 2, alpha = 1, eta0 = 0 -> block rescaled to norm 1
  std::vector<Vector> big = {Vector(std::vector<double>{1.2, 1.6})};  // norm 2
  GroupPoint one = project_group_domain(0.0, big, 1.0);
  CHECK(one.eta == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(norm2(one.blocks[0]) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(one.blocks[0][0] == doctest::Approx(0.6).epsilon(1e-9));

  // 20 seeded instances vs the Dykstra + KKT-bisection oracle
  Rng rng(7);
  const std::vector<std::size_t> sizes = {3, 2, 4};
  GroupFlat flat;
  flat.offsets = {0, 3, 5, 9};
  flat.alpha = 1.0;
  const std::size_t dim = 1 + 9;
  for (int rep = 0; rep < 20; ++rep) {
    Vector z(dim);
    z[0] = rng.uniform(-0.5, 1.5);
    for (std::size_t i = 1; i < dim; ++i) z[i] = rng.normal() * 0.8;

    std::vector<Vector> in;
    std::size_t pos = 1;
    for (std::size_t s : sizes) {
      Vector b(s);
      for (std::size_t i = 0; i < s; ++i) b[i] = z[pos++];
      in.push_back(b);
    }
    const GroupPoint got = project_group_domain(z[0], in, 1.0);

    const Vector want = dykstra(
        z,
        [&](const Vector& v) {
          Vector r = v;
          r[0] = std::max(0.0, r[0]);
          return r;
        },
        [&](const Vector& v) { return flat.project_cap(v); });

    CHECK(std::fabs(got.eta - want[0]) < 1e-6);
    pos = 1;
    for (std::size_t g = 0; g < sizes.size(); ++g)
      for (std::size_t i = 0; i < sizes[g]; ++i)
        CHECK(std::fabs(got.blocks[g][i] - want[pos++]) < 1e-6);
  }
}

TEST_CASE("project_spectral_simplex: idempotence on feasible, oracle") {
  // eta0 = alpha, S0 = 0 stays put
  SpectralPoint id = project_spectral_simplex(1.0, Matrix(3, 3), 1.0);
  CHECK(id.eta == doctest::Approx(1.0));
  CHECK(frob_norm(id.s) < 1e-12);

  // feasible point with distinct eigenvalues unchanged within 1e-10
  Rng rng(11);
  {
    const std::size_t k = 3;
    Eigen::MatrixXd g(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd lam(k);
    lam << 0.5, 0.3, 0.1;  // tr = 0.9, eta = 0.1 -> feasible, distinct
    Eigen::MatrixXd s0e = q * lam.asDiagonal() * q.transpose();
    Matrix s0(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) s0(i, j) = s0e(i, j);
    SpectralPoint fixed = project_spectral_simplex(0.1, s0, 1.0);
    CHECK(std::fabs(fixed.eta - 0.1) < 1e-10);
    for (std::size_t i = 0; i < k * k; ++i)
      CHECK(std::fabs(fixed.s.data()[i] - s0.data()[i]) < 1e-10);
  }

  // 20 seeded random instances vs Dykstra with a reference eigensolver
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t k = 4;
    Matrix s0 = testkit::random_symmetric(rng, k);
    const double eta0 = rng.uniform(-0.5, 1.0);
    const SpectralPoint got = project_spectral_simplex(eta0, s0, 1.0);

    Vector z(1 + k * k);
    z[0] = eta0;
    for (std::size_t i = 0; i < k * k; ++i) z[1 + i] = s0.data()[i];
    const Vector want = dykstra(
        z, [&](const Vector& v) { return psd_clip(v, k); },
        [&](const Vector& v) { return trace_affine(v, k, 1.0); });

    CHECK(std::fabs(got.eta - want[0]) < 1e-6);
    for (std::size_t i = 0; i < k * k; ++i)
      CHECK(std::fabs(got.s.data()[i] - want[1 + i]) < 1e-6);
    // domain: eta >= 0, S PSD, eta + tr S = alpha
    double tr = got.eta;
    for (std::size_t i = 0; i < k; ++i) tr += got.s(i, i);
    CHECK(tr == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(got.eta >= -1e-12);
  }
}

TEST_CASE("project_spectral_nuclear: idempotence, uniform shift, oracle") {
  // feasible input unchanged
  Matrix small(2, 2);
  small(0, 0) = 0.3;
  small(1, 1) = 0.2;
  SpectralPoint id = project_spectral_nuclear(0.1, small, 1.0);
  CHECK(id.eta == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(std::fabs(id.s(0, 0) - 0.3) < 1e-10);

  // eta0=0, diagonal S0 with ||S0||_nuc = 2 alpha: active cap, uniform shift
  Matrix twice(2, 2);
  twice(0, 0) = 1.2;
  twice(1, 1) = 0.8;  // nuclear norm 2, alpha 1
  SpectralPoint sh = project_spectral_nuclear(0.0, twice, 1.0);
  // simplex projection of (0, 1.2, 0.8) onto sum = 1 shifts by 1/3 each
  // (eta clipped at 0 reduces to the two singular values sharing the excess)
  CHECK(sh.eta == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sh.s(0, 0) == doctest::Approx(1.2 - 0.5).epsilon(1e-8));
  CHECK(sh.s(1, 1) == doctest::Approx(0.8 - 0.5).epsilon(1e-8));

  // 20 seeded random 3x3 instances vs Dykstra + SVD soft-threshold oracle
  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t k = 3;
    Matrix s0 = testkit::gaussian_matrix(rng, k, k);
    const double eta0 = rng.uniform(-0.5, 1.0);
    const SpectralPoint got = project_spectral_nuclear(eta0, s0, 1.0);

    Vector z(1 + k * k);
    z[0] = eta0;
    for (std::size_t i = 0; i < k * k; ++i) z[1 + i] = s0.data()[i];
    const Vector want = dykstra(
        z,
        [&](const Vector& v) {
          Vector r = v;
          r[0] = std::max(0.0, r[0]);
          return r;
        },
        [&](const Vector& v) { return nuclear_cap(v, k, k, 1.0); });

    CHECK(std::fabs(got.eta - want[0]) < 1e-6);
    for (std::size_t i = 0; i < k * k; ++i)
      CHECK(std::fabs(got.s.data()[i] - want[1 + i]) < 1e-6);
  }
}

// ---------------------------------------------------------------------------
// Shared properties: idempotence, nonexpansiveness, variational inequality.
// The Domain table lives in projection_oracles.hpp.
// ---------------------------------------------------------------------------

TEST_CASE("all projections: idempotence within 1e-10") {
  Rng rng(17);
  for (const auto& d : all_domains()) {
    CAPTURE(d.name);
    for (int rep = 0; rep < 20; ++rep) {
      Vector z = testkit::gaussian_vector(rng, d.dim);
      const Vector p = d.project(z);
      const Vector pp = d.project(p);
      CHECK(testkit::max_abs_diff(p, pp) <= 1e-10);
    }
  }
}

TEST_CASE("all projections: nonexpansiveness") {
  Rng rng(19);
  for (const auto& d : all_domains()) {
    CAPTURE(d.name);
    for (int rep = 0; rep < 50; ++rep) {
      const Vector z1 = testkit::gaussian_vector(rng, d.dim);
      const Vector z2 = testkit::gaussian_vector(rng, d.dim);
      const double lhs = norm2(d.project(z1) - d.project(z2));
      const double rhs = norm2(z1 - z2);
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("all projections: variational inequality against 1e3 feasible points") {
  Rng rng(23);
  for (const auto& d : all_domains()) {
    CAPTURE(d.name);
    for (int zi = 0; zi < 2; ++zi) {
      const Vector z = testkit::gaussian_vector(rng, d.dim);
      const Vector p = d.project(z);
      const Vector res = z - p;
      double worst = -1e300;
      for (int qi = 0; qi < 1000; ++qi) {
        const Vector q = d.sample(rng);
        worst = std::max(worst, dot(res, q - p));
      }
      CHECK(worst <= 1e-8);
    }
  }
}

TEST_CASE("oracle_project dispatch agrees with each domain's direct oracle") {
  Rng rng(29);
  for (const auto& d : all_domains()) {
    CAPTURE(d.name);
    const Vector z = testkit::gaussian_vector(rng, d.dim);
    const Vector via = oracle_project(d, z);
    const Vector impl = d.project(z);
    CHECK(testkit::max_abs_diff(via, impl) < 1e-6);
  }
}
