#include "kfw/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kfw/errors.hpp"
#include "kfw/select.hpp"

namespace kfw {

namespace {

constexpr int kMaxSweeps = 60;

// Flip column j of m so its first significantly-nonzero entry is >= 0.
// Returns true if a flip happened (the SVD pairs U/V flips).
bool fix_column_sign(Matrix& m, std::size_t j) {
  double amax = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    amax = std::max(amax, std::fabs(m(i, j)));
  if (amax == 0.0) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (std::fabs(m(i, j)) > 1e-12 * amax) {
      if (m(i, j) < 0.0) {
        for (std::size_t r = 0; r < m.rows(); ++r) m(r, j) = -m(r, j);
        return true;
      }
      return false;
    }
  }
  return false;
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymEig sym_eig(const Matrix& a_in) {
  const std::size_t n = a_in.rows();
  if (n == 0 || a_in.cols() != n)
    throw param_error("sym_eig: matrix must be square and non-empty");
  const double scale = frob_norm(a_in);
  if (a_in.max_abs_asymmetry() > 1e-10 * std::max(1.0, scale))
    throw param_error("sym_eig: input is not symmetric");

  // Work on the symmetrized copy; tiny asymmetries from accumulated roundoff
  // upstream are folded away here.
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (a_in(i, j) + a_in(j, i));

  Matrix v = Matrix::identity(n);
  const double stop = 1e-15 * std::max(scale, 1e-300);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= stop * n) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-17 * std::max(scale, 1e-300)) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- J^T A J with the (p,q)-plane rotation J = [[c, s], [-s, c]].
        kernels::rot(a.row(p), a.row(q), c, s, n);
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (off_diagonal_norm(a) > 1e-10 * std::max(scale, 1e-300) * n)
    throw numeric_error("sym_eig: Jacobi sweeps did not converge");

  // Sort ascending with deterministic tie order.
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
  std::vector<std::size_t> order = select_k_smallest(diag.data(), n, n);

  SymEig out;
  out.values = Vector(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    fix_column_sign(out.vectors, j);
  }
  return out;
}

SymEig eig_bottom_k(const Matrix& a, std::size_t k) {
  const std::size_t n = a.rows();
  if (k == 0 || k > n) throw param_error("eig_bottom_k: need 0 < k <= n");
  SymEig full = sym_eig(a);
  SymEig out;
  out.values = Vector(k);
  out.vectors = Matrix(n, k);
  for (std::size_t j = 0; j < k; ++j) {
    out.values[j] = full.values[j];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = full.vectors(i, j);
  }
  return out;
}

namespace {

// One-sided Jacobi for m >= n. Returns thin factors.
Svd svd_tall(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  // b holds A^T so the columns of A are contiguous rows; vt accumulates V^T.
  Matrix b = a.transposed();
  Matrix vt = Matrix::identity(n);
  const double scale = frob_norm(a);
  const double tol = 1e-15;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    std::size_t rotations = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = kernels::nrm2sq(b.row(p), m);
        const double beta = kernels::nrm2sq(b.row(q), m);
        const double gamma = kernels::dot(b.row(p), b.row(q), m);
        if (std::fabs(gamma) <= tol * std::sqrt(alpha * beta) ||
            alpha == 0.0 || beta == 0.0)
          continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) /
            (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        kernels::rot(b.row(p), b.row(q), c, s, m);
        kernels::rot(vt.row(p), vt.row(q), c, s, n);
        ++rotations;
      }
    }
    if (rotations == 0) break;
    if (sweep == kMaxSweeps - 1)
      throw numeric_error("svd: Jacobi sweeps did not converge");
  }

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i)
    norms[i] = std::sqrt(kernels::nrm2sq(b.row(i), m));
  std::vector<double> neg(n);
  for (std::size_t i = 0; i < n; ++i) neg[i] = -norms[i];
  const std::vector<std::size_t> order = select_k_smallest(neg.data(), n, n);

  Svd out;
  out.u = Matrix(m, n);
  out.sigma = Vector(n);
  out.v = Matrix(n, n);
  const double rank_tol = 1e-14 * std::max(scale, 1e-300);
  std::size_t rank = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = norms[src];
    for (std::size_t i = 0; i < n; ++i) out.v(i, j) = vt(src, i);
    if (norms[src] > rank_tol) {
      const double inv = 1.0 / norms[src];
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) = b(src, i) * inv;
      rank = j + 1;
    }
  }

  // Rank-deficient tail: complete U with unit vectors orthogonalized against
  // the leading columns (deterministic e_0, e_1, ... candidate order).
  for (std::size_t j = rank; j < n; ++j) {
    out.sigma[j] = 0.0;
    for (std::size_t cand = 0; cand < m; ++cand) {
      Vector w(m);
      w[cand] = 1.0;
      for (std::size_t prev = 0; prev < j; ++prev) {
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += w[i] * out.u(i, prev);
        for (std::size_t i = 0; i < m; ++i) w[i] -= proj * out.u(i, prev);
      }
      const double nw = norm2(w);
      if (nw > 1e-6) {
        for (std::size_t i = 0; i < m; ++i) out.u(i, j) = w[i] / nw;
        break;
      }
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    if (fix_column_sign(out.u, j)) {
      for (std::size_t i = 0; i < n; ++i) out.v(i, j) = -out.v(i, j);
    }
  }
  return out;
}

}  // namespace

Svd svd(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw param_error("svd: empty matrix");
  if (a.rows() >= a.cols()) return svd_tall(a);
  Svd t = svd_tall(a.transposed());
  Svd out;
  out.u = t.v;
  out.sigma = t.sigma;
  out.v = t.u;
  // Re-apply the sign convention on the swapped factors.
  for (std::size_t j = 0; j < out.u.cols(); ++j) {
    if (fix_column_sign(out.u, j)) {
      for (std::size_t i = 0; i < out.v.rows(); ++i)
        out.v(i, j) = -out.v(i, j);
    }
  }
  return out;
}

Svd svd_top_k(const Matrix& a, std::size_t k) {
  const std::size_t r = std::min(a.rows(), a.cols());
  if (k == 0 || k > r)
    throw param_error("svd_top_k: need 0 < k <= min(rows, cols)");
  Svd full = svd(a);
  Svd out;
  out.u = Matrix(a.rows(), k);
  out.sigma = Vector(k);
  out.v = Matrix(a.cols(), k);
  for (std::size_t j = 0; j < k; ++j) {
    out.sigma[j] = full.sigma[j];
    for (std::size_t i = 0; i < a.rows(); ++i) out.u(i, j) = full.u(i, j);
    for (std::size_t i = 0; i < a.cols(); ++i) out.v(i, j) = full.v(i, j);
  }
  return out;
}

std::size_t numerical_rank(const Matrix& a, double rel_tol) {
  Svd s = svd(a);
  if (s.sigma.size() == 0 || s.sigma[0] <= 0.0) return 0;
  std::size_t r = 0;
  for (std::size_t i = 0; i < s.sigma.size(); ++i)
    if (s.sigma[i] > rel_tol * s.sigma[0]) r = i + 1;
  return r;
}

}  // namespace kfw
