#pragma once

// The supported constraint-set families and their oracles.
//
// Every family provides:
//   - membership test, Euclidean diameter, a canonical starting vertex,
//   - loo(grad): a minimizer of <v, grad> over the set (linear optimization),
//   - kloo(grad, k): the k best extreme structures under the same objective,
//   - build_ds(anchor, kloo): the reduced parametrization spanned by the
//     anchor and the kloo output, for the multi-direction search.
//
// Matrix-variable sets (Spectrahedron, NuclearBall) flatten points row-major;
// the flat dot product then equals the trace inner product.
//
// Tie-breaking is deterministic everywhere: equal scores prefer the smaller
// index (for hypercube vertex enumeration, the lexicographically smaller flip
// set). Zero gradients return the canonical vertex.

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "kfw/dense.hpp"
#include "kfw/parametrization.hpp"
#include "kfw/rng.hpp"

namespace kfw {

struct Simplex {
  std::size_t n;
};

struct L1Ball {
  std::size_t n;
  double radius;
};

struct Hypercube {
  std::size_t n;
};

struct ProductSimplices {
  std::vector<std::size_t> block_sizes;
};

struct GroupNormBall {
  std::vector<std::vector<std::size_t>> groups;  // partition of 0..dim-1
  double radius;
};

struct Spectrahedron {
  std::size_t n;  // trace-1 PSD n x n matrices
};

struct NuclearBall {
  std::size_t n1, n2;
  double radius;
};

using FeasibleSet = std::variant<Simplex, L1Ball, Hypercube, ProductSimplices,
                                 GroupNormBall, Spectrahedron, NuclearBall>;

// --- kloo outputs ----------------------------------------------------------

// Explicit vertex list, best first (simplex, hypercube).
struct Vertices {
  std::vector<Vector> atoms;
};

// (coordinate, sign) pairs; the atom is radius * sign * e_index for the l1
// ball (best |gradient| first) and an index selection with sign +1 for
// products of simplices (blocks concatenated).
struct SignedCoords {
  std::vector<std::pair<std::size_t, int>> entries;
};

// Selected group ids, largest gradient-block norm first.
struct Groups {
  std::vector<std::size_t> ids;
};

// Orthonormal basis of the k smallest eigenvectors of the gradient.
struct EigBasis {
  Matrix v;  // n x k
};

// Leading k singular bases of the gradient.
struct SingularBases {
  Matrix u;  // n1 x k
  Matrix v;  // n2 x k
};

using KlooOutput =
    std::variant<Vertices, SignedCoords, Groups, EigBasis, SingularBases>;

// --- operations -------------------------------------------------------------

// Throws param_error on malformed sets (zero dims, non-positive radii,
// group lists that do not partition the coordinates).
void validate_set(const FeasibleSet& set);

std::size_t ambient_dim(const FeasibleSet& set);
bool contains(const FeasibleSet& set, const Vector& x, double tol = 1e-9);
double diameter(const FeasibleSet& set);
Vector canonical_vertex(const FeasibleSet& set);

// Largest admissible k for kloo on this set.
std::size_t max_k(const FeasibleSet& set);

// True when the set is a polytope whose kloo output enumerates vertices
// (needed by away/pairwise steps and the vertex-gap certificate).
bool vertex_representable(const FeasibleSet& set);

Vector loo(const FeasibleSet& set, const Vector& grad);
KlooOutput kloo(const FeasibleSet& set, const Vector& grad, std::size_t k);

// Ambient atoms realizing the kloo output, best first. For basis outputs
// these are the canonical rank-one extreme points; for products of simplices,
// the r-th atom combines the r-th best selection per block (capped at each
// block's selection count).
std::vector<Vector> kloo_atoms(const FeasibleSet& set, const KlooOutput& out);

// Reduced search domain spanned by the anchor and the kloo output. Atoms
// exactly equal to the anchor are dropped.
DsParametrization build_ds(const FeasibleSet& set, const Vector& anchor,
                           const KlooOutput& out);

// Seeded feasible sample (used by growth probes and property tests).
Vector sample_feasible(const FeasibleSet& set, Rng& rng);

std::string set_family_name(const FeasibleSet& set);

}  // namespace kfw
