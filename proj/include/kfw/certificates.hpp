#pragma once

// Solution diagnostics: duality gap, solution-face sparsity, the
// strict-complementarity spectral gap at the solution, a probed quadratic
// growth constant, and the finite-convergence horizon assembled from them.

#include <optional>

#include "kfw/problem.hpp"

namespace kfw {

// <grad f(x), x - v> with v the linear-optimization minimizer; equals zero
// exactly at a solution, and upper-bounds f(x) - f*.
double fw_gap(const CompositeObjective& f, const FeasibleSet& set,
              const Vector& x);

struct SparsityInfo {
  // Vertex count of the smallest face containing x (support size for the
  // simplex/l1 families, live group count, numerical rank for spectral
  // sets, 2^(fractional coords) for the hypercube).
  std::size_t r = 0;
  // The underlying raw count; differs from r only on the hypercube, where it
  // is the number of fractional coordinates.
  std::size_t count = 0;
  // Supporting indices (coordinates, group ids); empty for spectral sets.
  std::vector<std::size_t> support;
};

SparsityInfo sparsity_measure(const FeasibleSet& set, const Vector& x,
                              double tol = 1e-8);

// The gap between the r-th and (r+1)-th best extreme structure under the
// gradient at the solution:
//   polytopes      : (r+1)-th smallest vertex inner product minus the r-th
//   group ball     : r-th largest block norm minus the (r+1)-th
//   spectrahedron  : (r+1)-th smallest eigenvalue minus the r-th
//   nuclear ball   : r-th singular value minus the (r+1)-th
// Positive iff strict complementarity holds with face-vertex count r.
// Hypercube enumeration is limited to n <= 20. Not available for products of
// simplices.
double delta_gap(const FeasibleSet& set, const Vector& grad_at_solution,
                 std::size_t r);

// Probed quadratic-growth constant: min over seeded feasible samples u (and
// points pulled toward x_star along each segment) of
// (f(u) - f_star) / ||u - x_star||^2.
double probe_quadratic_growth(const CompositeObjective& f,
                              const FeasibleSet& set, const Vector& x_star,
                              double f_star, std::size_t n_samples = 1000,
                              std::uint64_t seed = 7);

struct Certificate {
  double fw_gap = 0.0;
  SparsityInfo sparsity;
  std::optional<double> delta;    // absent for unsupported families
  double gamma = 0.0;             // probed growth constant
  double smoothness = 0.0;        // L_f
  double diameter = 0.0;          // D
  // Finite-convergence horizon 4 L^3 D^4 / (gamma delta^2); present when a
  // positive delta and gamma are available.
  std::optional<double> t_bound;
};

Certificate certify(const Problem& prob, const Vector& x, double rank_tol = 1e-6,
                    std::size_t growth_samples = 1000);

}  // namespace kfw
