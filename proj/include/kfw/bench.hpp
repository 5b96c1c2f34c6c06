#pragma once

// Seeded synthetic benchmark generators. Every generator is a pure function
// of its arguments: the same call produces byte-identical problem data, and
// each problem carries a content hash so result files can be cross-checked.
//
// Default sizes are desk scale (quick runs); `paper scale` in the CLI selects
// the 10x-larger configurations. Noise levels are fractions of the signal's
// entrywise standard deviation.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kfw/problem.hpp"

namespace kfw {

// min ||Ax - b||^2 over an l1 ball whose radius equals ||x_true||_1.
// A is m x n Gaussian; x_true has s nonzeros with magnitudes in [0.5, 1.5].
Problem gen_lasso(std::size_t m, std::size_t n, std::size_t s, double noise,
                  std::uint64_t seed);

// Kernel SVM dual over the simplex: f(lambda) = lambda' Q lambda with
// Q_ij = y_i y_j (x_i'x_j + 1)^2 + (1/C) 1{i=j}, realized as ||Q^{1/2} x||^2.
struct SvmInstance {
  Problem problem;
  Matrix features;          // n_features x n_samples
  std::vector<int> labels;  // +1 / -1
  double c_param = 10.0;
};
SvmInstance gen_svm_instance(std::size_t n_samples, std::size_t n_features,
                             std::uint64_t seed, double c_param = 10.0);
Problem gen_svm(std::size_t n_samples, std::size_t n_features,
                std::uint64_t seed, double c_param = 10.0);

// min ||WX - Y||_F^2 over a group-norm ball; the variable is vec(W) with one
// group per column of W (p entries each); `live` planted nonzero columns.
Problem gen_group_lasso(std::size_t p, std::size_t n, std::size_t groups,
                        std::size_t live, double noise, std::uint64_t seed);

// min sum over observed entries (X_ij - M_ij)^2 over a nuclear-norm ball of
// radius ||M||_nuc, M a planted rank-`rank` matrix, mask seeded-uniform.
Problem gen_matrix_completion(std::size_t n1, std::size_t n2, std::size_t rank,
                              double obs_frac, std::uint64_t seed);

// Cone over a regular n-gon, minimized objective x^2 + y^2 + z, written in
// barycentric coordinates over the (n+1)-vertex simplex (apex first). The
// start corresponds to the 3-d point (0, 0, 0.1); the optimum is the origin.
Problem gen_cone_polygon(std::size_t n_vertices);

// min ||x - z||^2 over the unit hypercube; z has `n_fractional` coordinates
// uniform in (0,1) and the rest equal to 2, so x_star = clamp(z, 0, 1).
Problem gen_hypercube_projection(std::size_t n, std::size_t n_fractional,
                                 std::uint64_t seed);

// Planted spectral instances: f(X) = ||X - B||_F^2 with B built so that the
// constrained minimizer, its rank, and the spectral complementarity gap are
// known exactly.
Problem gen_spectrahedron_planted(std::size_t n, std::size_t rank, double gap,
                                  std::uint64_t seed);
Problem gen_nuclear_planted(std::size_t n1, std::size_t n2, std::size_t rank,
                            double gap, double radius, std::uint64_t seed);

// Name-driven construction used by the CLI. Recognized names: lasso, svm,
// group_lasso, matrix_completion, cone_polygon, hypercube, spectrahedron,
// nuclear. `overrides` may replace any documented numeric parameter; unknown
// keys raise param_error.
Problem make_bench_problem(const std::string& name, std::uint64_t seed,
                           bool paper_scale,
                           const std::map<std::string, double>& overrides);

// Parameter schedule (defaults after applying scale + overrides); exposed so
// the CLI can document and serialize generated instances.
std::map<std::string, double> bench_defaults(const std::string& name,
                                             bool paper_scale);

}  // namespace kfw
