#include "kfw/parametrization.hpp"

#include <algorithm>
#include <cmath>

#include "kfw/errors.hpp"
#include "kfw/projections.hpp"

namespace kfw {

// ---------------------------------------------------------------------------
// ConvexHullDs
// ---------------------------------------------------------------------------

Vector ConvexHullDs::theta0() const {
  Vector t(theta_dim());
  t[0] = 1.0;
  return t;
}

Vector ConvexHullDs::map_point(const Vector& theta) const {
  Vector x = theta[0] * anchor;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    axpy(theta[1 + i], atoms[i], x);
  return x;
}

Vector ConvexHullDs::adjoint_gradient(const Vector& g) const {
  Vector t(theta_dim());
  t[0] = dot(anchor, g);
  for (std::size_t i = 0; i < atoms.size(); ++i) t[1 + i] = dot(atoms[i], g);
  return t;
}

Vector ConvexHullDs::project_domain(const Vector& theta) const {
  return project_simplex(theta);
}

// ---------------------------------------------------------------------------
// GroupSupportDs
// ---------------------------------------------------------------------------

std::size_t GroupSupportDs::theta_dim() const {
  std::size_t d = 1;
  for (const auto& g : support) d += g.size();
  return d;
}

Vector GroupSupportDs::theta0() const {
  Vector t(theta_dim());
  t[0] = 1.0;
  return t;
}

Vector GroupSupportDs::map_point(const Vector& theta) const {
  Vector x = theta[0] * anchor;
  std::size_t off = 1;
  for (const auto& g : support) {
    for (std::size_t i = 0; i < g.size(); ++i) x[g[i]] += radius * theta[off + i];
    off += g.size();
  }
  return x;
}

Vector GroupSupportDs::adjoint_gradient(const Vector& g_amb) const {
  Vector t(theta_dim());
  t[0] = dot(anchor, g_amb);
  std::size_t off = 1;
  for (const auto& g : support) {
    for (std::size_t i = 0; i < g.size(); ++i) t[off + i] = radius * g_amb[g[i]];
    off += g.size();
  }
  return t;
}

Vector GroupSupportDs::project_domain(const Vector& theta) const {
  std::vector<Vector> blocks(support.size());
  std::size_t off = 1;
  for (std::size_t j = 0; j < support.size(); ++j) {
    blocks[j] = Vector(support[j].size());
    for (std::size_t i = 0; i < support[j].size(); ++i)
      blocks[j][i] = theta[off + i];
    off += support[j].size();
  }
  const GroupPoint p = project_group_domain(theta[0], blocks, 1.0);
  Vector out(theta.size());
  out[0] = p.eta;
  off = 1;
  for (std::size_t j = 0; j < support.size(); ++j) {
    for (std::size_t i = 0; i < support[j].size(); ++i)
      out[off + i] = p.blocks[j][i];
    off += support[j].size();
  }
  return out;
}

// ---------------------------------------------------------------------------
// SpectralSimplexDs
// ---------------------------------------------------------------------------

Vector SpectralSimplexDs::theta0() const {
  Vector t(theta_dim());
  t[0] = 1.0;
  return t;
}

Vector SpectralSimplexDs::map_point(const Vector& theta) const {
  const std::size_t kk = k();
  Vector x = theta[0] * anchor;
  Matrix s(kk, kk);
  for (std::size_t i = 0; i < kk * kk; ++i) s.data()[i] = theta[1 + i];
  // X += V S V^T
  const Matrix sv = matmul(s, basis.transposed());  // k x n
  const Matrix vsv = matmul(basis, sv);             // n x n
  kernels::axpy(1.0, vsv.data(), x.data(), n * n);
  return x;
}

Vector SpectralSimplexDs::adjoint_gradient(const Vector& g) const {
  const std::size_t kk = k();
  Vector t(theta_dim());
  t[0] = dot(anchor, g);
  const Matrix gm = reshape(g, n, n);
  const Matrix gv = matmul(gm, basis);                    // n x k
  const Matrix vgv = matmul(basis.transposed(), gv);      // k x k
  for (std::size_t r = 0; r < kk; ++r)
    for (std::size_t c = 0; c < kk; ++c)
      t[1 + r * kk + c] = 0.5 * (vgv(r, c) + vgv(c, r));
  return t;
}

Vector SpectralSimplexDs::project_domain(const Vector& theta) const {
  const std::size_t kk = k();
  Matrix s(kk, kk);
  for (std::size_t r = 0; r < kk; ++r)
    for (std::size_t c = 0; c < kk; ++c) {
      const double a = theta[1 + r * kk + c], b = theta[1 + c * kk + r];
      s(r, c) = 0.5 * (a + b);
    }
  const SpectralPoint p = project_spectral_simplex(theta[0], s, 1.0);
  Vector out(theta.size());
  out[0] = p.eta;
  for (std::size_t i = 0; i < kk * kk; ++i) out[1 + i] = p.s.data()[i];
  return out;
}

// ---------------------------------------------------------------------------
// SpectralNuclearDs
// ---------------------------------------------------------------------------

Vector SpectralNuclearDs::theta0() const {
  Vector t(theta_dim());
  t[0] = 1.0;
  return t;
}

Vector SpectralNuclearDs::map_point(const Vector& theta) const {
  const std::size_t kk = k();
  Vector x = theta[0] * anchor;
  Matrix s(kk, kk);
  for (std::size_t i = 0; i < kk * kk; ++i) s.data()[i] = radius * theta[1 + i];
  const Matrix sv = matmul(s, v.transposed());  // k x n2
  const Matrix usv = matmul(u, sv);             // n1 x n2
  kernels::axpy(1.0, usv.data(), x.data(), n1 * n2);
  return x;
}

Vector SpectralNuclearDs::adjoint_gradient(const Vector& g) const {
  const std::size_t kk = k();
  Vector t(theta_dim());
  t[0] = dot(anchor, g);
  const Matrix gm = reshape(g, n1, n2);
  const Matrix gv = matmul(gm, v);                    // n1 x k
  const Matrix ugv = matmul(u.transposed(), gv);      // k x k
  for (std::size_t i = 0; i < kk * kk; ++i) t[1 + i] = radius * ugv.data()[i];
  return t;
}

Vector SpectralNuclearDs::project_domain(const Vector& theta) const {
  const std::size_t kk = k();
  Matrix s(kk, kk);
  for (std::size_t i = 0; i < kk * kk; ++i) s.data()[i] = theta[1 + i];
  const SpectralPoint p = project_spectral_nuclear(theta[0], s, 1.0);
  Vector out(theta.size());
  out[0] = p.eta;
  for (std::size_t i = 0; i < kk * kk; ++i) out[1 + i] = p.s.data()[i];
  return out;
}

// ---------------------------------------------------------------------------
// ScaledProductSimplicesDs
// ---------------------------------------------------------------------------

std::size_t ScaledProductSimplicesDs::theta_dim() const {
  std::size_t d = blocks.size();
  for (const auto& I : index_sets) d += I.size();
  return d;
}

Vector ScaledProductSimplicesDs::theta0() const {
  Vector t(theta_dim());
  std::size_t off = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    t[off] = 1.0;  // eta_j
    for (std::size_t i = 0; i < index_sets[j].size(); ++i)
      t[off + 1 + i] = anchor[index_sets[j][i]];
    off += 1 + index_sets[j].size();
  }
  return t;
}

Vector ScaledProductSimplicesDs::map_point(const Vector& theta) const {
  Vector x(anchor.size());
  std::size_t off = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const double eta = theta[off];
    for (std::size_t c : blocks[j]) x[c] = eta * anchor[c];
    for (std::size_t i = 0; i < index_sets[j].size(); ++i)
      x[index_sets[j][i]] = theta[off + 1 + i];
    off += 1 + index_sets[j].size();
  }
  return x;
}

Vector ScaledProductSimplicesDs::adjoint_gradient(const Vector& g) const {
  Vector t(theta_dim());
  std::size_t off = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    double acc = 0.0;
    for (std::size_t c : blocks[j]) acc += anchor[c] * g[c];
    for (std::size_t i : index_sets[j]) acc -= anchor[i] * g[i];
    t[off] = acc;  // d/d eta_j = <anchor restricted off I_j, g>
    for (std::size_t i = 0; i < index_sets[j].size(); ++i)
      t[off + 1 + i] = g[index_sets[j][i]];
    off += 1 + index_sets[j].size();
  }
  return t;
}

Vector ScaledProductSimplicesDs::project_domain(const Vector& theta) const {
  Vector out(theta.size());
  std::size_t off = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const std::size_t m = index_sets[j].size();
    const double s = off_mass[j];
    if (s > 0.0) {
      Vector t0(m + 1), w(m + 1);
      t0[0] = theta[off];
      w[0] = s;
      for (std::size_t i = 0; i < m; ++i) {
        t0[1 + i] = theta[off + 1 + i];
        w[1 + i] = 1.0;
      }
      const Vector p = project_weighted_simplex(t0, w, 1.0);
      for (std::size_t i = 0; i < m + 1; ++i) out[off + i] = p[i];
    } else {
      // Anchor fully supported on I_j: eta_j is inert, alphas form a simplex.
      Vector a(m);
      for (std::size_t i = 0; i < m; ++i) a[i] = theta[off + 1 + i];
      const Vector p = project_simplex(a);
      out[off] = std::max(0.0, theta[off]);
      for (std::size_t i = 0; i < m; ++i) out[off + 1 + i] = p[i];
    }
    off += 1 + m;
  }
  return out;
}

// ---------------------------------------------------------------------------
// variant dispatch
// ---------------------------------------------------------------------------

std::size_t theta_dim(const DsParametrization& p) {
  return std::visit([](const auto& v) { return v.theta_dim(); }, p);
}
Vector theta0(const DsParametrization& p) {
  return std::visit([](const auto& v) { return v.theta0(); }, p);
}
Vector ds_map_point(const DsParametrization& p, const Vector& theta) {
  return std::visit([&](const auto& v) { return v.map_point(theta); }, p);
}
Vector ds_adjoint_gradient(const DsParametrization& p, const Vector& g) {
  return std::visit([&](const auto& v) { return v.adjoint_gradient(g); }, p);
}
Vector ds_project_domain(const DsParametrization& p, const Vector& theta) {
  return std::visit([&](const auto& v) { return v.project_domain(theta); }, p);
}

}  // namespace kfw
