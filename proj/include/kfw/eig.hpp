#pragma once

// Symmetric eigendecomposition (cyclic Jacobi) and partial spectra.
//
// Jacobi is chosen over tridiagonalization for its simplicity, unconditional
// robustness and excellent accuracy at the moderate dimensions this toolkit
// targets (n up to a few hundred). Rotations ride on the SIMD `rot` kernel.

#include "kfw/dense.hpp"

namespace kfw {

struct SymEig {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, vectors.col(i) pairs values[i]
};

// Full decomposition of a symmetric matrix. The input is validated to be
// symmetric (relative tolerance) and symmetrized internally before
// factorization. Eigenvector sign: first entry of significant magnitude is
// made nonnegative, so results are deterministic.
SymEig sym_eig(const Matrix& a);

// Bottom-k eigenpairs (k smallest eigenvalues, ascending).
SymEig eig_bottom_k(const Matrix& a, std::size_t k);

struct Svd {
  Matrix u;       // m x r, orthonormal columns
  Vector sigma;   // descending, length r
  Matrix v;       // n x r, orthonormal columns
};

// Thin SVD (r = min(m, n)) via one-sided Jacobi on the columns of A.
// Singular values are exact zeros are completed to a full orthonormal basis.
// Sign convention matches sym_eig (first significant entry of each U column
// nonnegative, V flipped in tandem).
Svd svd(const Matrix& a);

// Leading k singular triplets (descending).
Svd svd_top_k(const Matrix& a, std::size_t k);

// Numerical rank: number of singular values above rel_tol * sigma_max.
std::size_t numerical_rank(const Matrix& a, double rel_tol);

}  // namespace kfw
