#pragma once

// Euclidean projections used by the direction-search subproblems.
//
// All are exact (sort/scan thresholding, plus one spectral factorization for
// the matrix domains) rather than iterative. Scaled sets are handled through
// P_{aC}(z) = a P_C(z/a).

#include <vector>

#include "kfw/dense.hpp"

namespace kfw {

// Projection onto the scaled probability simplex {x >= 0, sum x = alpha}.
Vector project_simplex(const Vector& z, double alpha = 1.0);

// Projection onto the scaled capped simplex {x >= 0, sum x <= alpha}.
Vector project_capped_simplex(const Vector& z, double alpha = 1.0);

// Projection onto {t >= 0, sum_i w_i t_i = rhs} with positive weights.
// Exact breakpoint scan on the KKT multiplier.
Vector project_weighted_simplex(const Vector& t0, const Vector& w, double rhs);

struct GroupPoint {
  double eta;
  std::vector<Vector> blocks;
};

// Projection onto {(eta, lambda) : eta >= 0, eta + sum_g ||lambda_g||_2 <= alpha}.
// Two steps: project (eta0, per-block norms) onto the alpha-capped simplex,
// then rescale each block to its projected norm (zero blocks stay zero).
GroupPoint project_group_domain(double eta0, const std::vector<Vector>& blocks,
                                double alpha = 1.0);

struct SpectralPoint {
  double eta;
  Matrix s;
};

// Projection onto {(eta, S) : eta >= 0, S symmetric PSD, eta + tr S = alpha}.
// Eigendecompose S0 and project (eta0, spectrum) onto the scaled simplex.
SpectralPoint project_spectral_simplex(double eta0, const Matrix& s0,
                                       double alpha = 1.0);

// Projection onto {(eta, S) : eta >= 0, eta + ||S||_nuclear <= alpha}.
// SVD of S0, then (eta0, singular values) onto the scaled capped simplex.
// The cap is an inequality because the underlying ball constraint is one.
SpectralPoint project_spectral_nuclear(double eta0, const Matrix& s0,
                                       double alpha = 1.0);

}  // namespace kfw
