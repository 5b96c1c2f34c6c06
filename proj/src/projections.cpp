#include "kfw/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kfw/eig.hpp"
#include "kfw/errors.hpp"

namespace kfw {

Vector project_simplex(const Vector& z, double alpha) {
  if (z.size() == 0) throw param_error("project_simplex: empty input");
  if (!(alpha > 0.0)) throw param_error("project_simplex: alpha must be > 0");
  const std::size_t n = z.size();
  std::vector<double> u(z.begin(), z.end());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  std::size_t rho = 0;
  for (std::size_t j = 0; j < n; ++j) {
    cum += u[j];
    const double t = (cum - alpha) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) {
      rho = j + 1;
      tau = t;
    }
  }
  Vector x(n);
  (void)rho;  // rho >= 1 always; tau from the last admissible prefix
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(z[i] - tau, 0.0);
  return x;
}

Vector project_capped_simplex(const Vector& z, double alpha) {
  if (z.size() == 0) throw param_error("project_capped_simplex: empty input");
  if (!(alpha > 0.0))
    throw param_error("project_capped_simplex: alpha must be > 0");
  Vector p(z.size());
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::max(z[i], 0.0);
    s += p[i];
  }
  if (s <= alpha) return p;
  return project_simplex(z, alpha);
}

Vector project_weighted_simplex(const Vector& t0, const Vector& w,
                                double rhs) {
  const std::size_t n = t0.size();
  if (n == 0 || w.size() != n)
    throw param_error("project_weighted_simplex: size mismatch");
  if (!(rhs > 0.0)) throw param_error("project_weighted_simplex: rhs <= 0");
  for (std::size_t i = 0; i < n; ++i)
    if (!(w[i] > 0.0))
      throw param_error("project_weighted_simplex: weights must be positive");

  // KKT: t_i = max(0, t0_i - w_i tau), with tau solving
  // sum_i w_i max(0, t0_i - w_i tau) = rhs. Scan breakpoints tau_i = t0_i/w_i
  // in descending order; within a segment the equation is linear in tau.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return t0[a] / w[a] > t0[b] / w[b];
  });

  double swt = 0.0;   // sum of w_i * t0_i over the active prefix
  double sww = 0.0;   // sum of w_i^2 over the active prefix
  double tau = 0.0;
  bool found = false;
  for (std::size_t j = 0; j < n && !found; ++j) {
    const std::size_t i = order[j];
    swt += w[i] * t0[i];
    sww += w[i] * w[i];
    const double cand = (swt - rhs) / sww;
    const double next_bp = (j + 1 < n)
                               ? t0[order[j + 1]] / w[order[j + 1]]
                               : -std::numeric_limits<double>::infinity();
    // Valid when every prefix coordinate stays positive at cand (cand below
    // the current breakpoint is automatic) and no further coordinate opens.
    if (cand >= next_bp) {
      tau = cand;
      found = true;
    }
  }
  if (!found) tau = (swt - rhs) / sww;  // all coordinates active

  Vector t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = std::max(0.0, t0[i] - w[i] * tau);
  return t;
}

GroupPoint project_group_domain(double eta0, const std::vector<Vector>& blocks,
                                double alpha) {
  const std::size_t g = blocks.size();
  if (g == 0) throw param_error("project_group_domain: no blocks");
  Vector head(g + 1);
  head[0] = eta0;
  for (std::size_t j = 0; j < g; ++j) head[j + 1] = norm2(blocks[j]);
  const Vector proj = project_capped_simplex(head, alpha);

  GroupPoint out;
  out.eta = proj[0];
  out.blocks.resize(g);
  for (std::size_t j = 0; j < g; ++j) {
    const double a0 = head[j + 1];
    const double a = proj[j + 1];
    if (a0 > 0.0 && a > 0.0) {
      out.blocks[j] = (a / a0) * blocks[j];
    } else {
      // Capped-simplex projection never grows a zero norm, so the block is 0.
      out.blocks[j] = Vector(blocks[j].size());
    }
  }
  return out;
}

SpectralPoint project_spectral_simplex(double eta0, const Matrix& s0,
                                       double alpha) {
  const std::size_t k = s0.rows();
  if (k == 0 || s0.cols() != k)
    throw param_error("project_spectral_simplex: S0 must be square");
  const SymEig ed = sym_eig(s0);

  Vector head(k + 1);
  head[0] = eta0;
  for (std::size_t i = 0; i < k; ++i) head[i + 1] = ed.values[i];
  const Vector proj = project_simplex(head, alpha);

  SpectralPoint out;
  out.eta = proj[0];
  out.s = Matrix(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const double lam = proj[i + 1];
    if (lam == 0.0) continue;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        out.s(r, c) += lam * ed.vectors(r, i) * ed.vectors(c, i);
  }
  return out;
}

SpectralPoint project_spectral_nuclear(double eta0, const Matrix& s0,
                                       double alpha) {
  const std::size_t k = std::min(s0.rows(), s0.cols());
  if (k == 0) throw param_error("project_spectral_nuclear: empty S0");
  const Svd sv = svd(s0);

  Vector head(k + 1);
  head[0] = eta0;
  for (std::size_t i = 0; i < k; ++i) head[i + 1] = sv.sigma[i];
  const Vector proj = project_capped_simplex(head, alpha);

  SpectralPoint out;
  out.eta = proj[0];
  out.s = Matrix(s0.rows(), s0.cols());
  for (std::size_t i = 0; i < k; ++i) {
    const double sig = proj[i + 1];
    if (sig == 0.0) continue;
    for (std::size_t r = 0; r < s0.rows(); ++r)
      for (std::size_t c = 0; c < s0.cols(); ++c)
        out.s(r, c) += sig * sv.u(r, i) * sv.v(c, i);
  }
  return out;
}

}  // namespace kfw
