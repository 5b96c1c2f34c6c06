#pragma once

// Solvers for the reduced direction-search problems
//     min_theta  F(theta) = f(map(theta))   s.t. theta in the domain,
// and exact line search along a segment.
//
// The workhorse is an accelerated projected gradient method (FISTA) with
// backtracking on the step size and momentum restart whenever the objective
// increases. Quadratic composite objectives get a specialized path: the map
// is affine and small, so the reduced quadratic model (Hessian and linear
// term in theta) is precomputed once and every inner iteration costs
// O(dim(theta)^2) independent of the ambient dimension.
//
// The returned point is the best iterate seen, which guarantees
// F(result) <= F(theta0) for a feasible warm start.

#include "kfw/objective.hpp"
#include "kfw/parametrization.hpp"

namespace kfw {

struct ApgConfig {
  int max_inner = 500;
  double rel_tol = 1e-10;
  // Step-size shrink factor per backtrack (the curvature estimate grows by
  // its inverse).
  double backtrack = 0.5;
  // Stop after this many consecutive relative changes below rel_tol.
  int small_change_streak = 3;
  // Absolute iterate-step (infinity norm) that must also be reached before a
  // stagnant objective counts as convergence. Reduced-domain coordinates are
  // unit-scaled, so an absolute tolerance is meaningful.
  double step_tol = 1e-11;
  // Force the generic evaluate-through-the-map path even for quadratics
  // (used by tests to cross-check the specialized path).
  bool force_generic = false;

  bool operator==(const ApgConfig&) const = default;
};

struct SubproblemResult {
  Vector theta;
  double value;
  int iterations;
  bool converged;
};

// Minimize f(map(theta)) over the parametrization's domain, starting from
// theta0 (projected onto the domain first).
SubproblemResult apg_solve(const CompositeObjective& f,
                           const DsParametrization& p, const Vector& theta0,
                           const ApgConfig& cfg);

enum class LineSearchMode { automatic, exact_quadratic, bisection };

// Minimize f(x + gamma d) over gamma in [0, gamma_max]. "automatic" uses the
// closed-form quadratic step when the outer function is quadratic and 60
// bisection steps on the directional derivative otherwise. grad_x is the
// gradient of f at x.
double line_search(const CompositeObjective& f, const Vector& x,
                   const Vector& grad_x, const Vector& d, double gamma_max,
                   LineSearchMode mode = LineSearchMode::automatic);

}  // namespace kfw
