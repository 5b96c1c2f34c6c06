#pragma once

// Reduced parametrizations for the k-direction search.
//
// Each variant describes an affine map theta -> x from a small convex domain
// into the feasible set, anchored at the current iterate (theta0 maps to the
// anchor). The multi-direction search minimizes f(map(theta)) over the domain
// with a projected accelerated gradient method, so every variant supplies:
//   theta_dim / theta0 / map_point / adjoint_gradient / project_domain.
//
// Radii are folded into the map (coordinates are stored normalized), so the
// projection domains are always the unit ones.

#include <variant>
#include <vector>

#include "kfw/dense.hpp"

namespace kfw {

// x = theta[0] * anchor + sum_i theta[1+i] * atoms[i],  theta in the simplex.
struct ConvexHullDs {
  Vector anchor;
  std::vector<Vector> atoms;

  std::size_t theta_dim() const { return 1 + atoms.size(); }
  Vector theta0() const;
  Vector map_point(const Vector& theta) const;
  Vector adjoint_gradient(const Vector& g) const;
  Vector project_domain(const Vector& theta) const;
};

// x = eta * anchor + radius * embed(lambda), lambda supported on the chosen
// groups; domain {eta >= 0, eta + sum_g ||lambda_g|| <= 1}.
struct GroupSupportDs {
  Vector anchor;
  std::vector<std::vector<std::size_t>> support;  // coordinate lists
  double radius = 1.0;

  std::size_t theta_dim() const;
  Vector theta0() const;
  Vector map_point(const Vector& theta) const;
  Vector adjoint_gradient(const Vector& g) const;
  Vector project_domain(const Vector& theta) const;
};

// X = eta * W + V S V^T with S symmetric PSD (stored dense k x k);
// domain {eta >= 0, S PSD, eta + tr S = 1}. Points are flattened n x n.
struct SpectralSimplexDs {
  Vector anchor;  // flattened n x n
  Matrix basis;   // n x k, orthonormal columns
  std::size_t n = 0;

  std::size_t k() const { return basis.cols(); }
  std::size_t theta_dim() const { return 1 + k() * k(); }
  Vector theta0() const;
  Vector map_point(const Vector& theta) const;
  Vector adjoint_gradient(const Vector& g) const;
  Vector project_domain(const Vector& theta) const;
};

// X = eta * W + radius * U S V^T (S dense k x k, any sign);
// domain {eta >= 0, eta + ||S||_nuclear <= 1}. Points flattened n1 x n2.
struct SpectralNuclearDs {
  Vector anchor;  // flattened n1 x n2
  Matrix u;       // n1 x k
  Matrix v;       // n2 x k
  std::size_t n1 = 0, n2 = 0;
  double radius = 1.0;

  std::size_t k() const { return u.cols(); }
  std::size_t theta_dim() const { return 1 + k() * k(); }
  Vector theta0() const;
  Vector map_point(const Vector& theta) const;
  Vector adjoint_gradient(const Vector& g) const;
  Vector project_domain(const Vector& theta) const;
};

// Per-block mixture for products of simplices: inside block j the coordinates
// listed in index_sets[j] carry free weights alpha_i, the rest keep the
// anchor's (scaled by eta_j):
//   x_i = alpha_i              for i in I_j
//   x_i = eta_j * anchor_i     otherwise
// with sum_{I_j} alpha_i + eta_j * (anchor mass off I_j) = 1 per block.
struct ScaledProductSimplicesDs {
  Vector anchor;
  std::vector<std::vector<std::size_t>> blocks;      // all coords per block
  std::vector<std::vector<std::size_t>> index_sets;  // I_j (subset of block j)
  std::vector<double> off_mass;  // sum of anchor entries off I_j, per block

  std::size_t theta_dim() const;
  Vector theta0() const;
  Vector map_point(const Vector& theta) const;
  Vector adjoint_gradient(const Vector& g) const;
  Vector project_domain(const Vector& theta) const;
};

using DsParametrization =
    std::variant<ConvexHullDs, GroupSupportDs, SpectralSimplexDs,
                 SpectralNuclearDs, ScaledProductSimplicesDs>;

std::size_t theta_dim(const DsParametrization& p);
Vector theta0(const DsParametrization& p);
Vector ds_map_point(const DsParametrization& p, const Vector& theta);
Vector ds_adjoint_gradient(const DsParametrization& p, const Vector& g);
Vector ds_project_domain(const DsParametrization& p, const Vector& theta);

}  // namespace kfw
