#include "kfw/subsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "kfw/eig.hpp"
#include "kfw/errors.hpp"

namespace kfw {

namespace {

// Reduced model interface: value and gradient of F(theta) = f(map(theta)).
struct ReducedModel {
  virtual ~ReducedModel() = default;
  virtual double value(const Vector& theta) const = 0;
  virtual double value_gradient(const Vector& theta, Vector& grad) const = 0;
  virtual double curvature_hint() const = 0;  // initial L estimate
  // Magnitude of the intermediate terms inside value(): rounding noise in a
  // computed value is proportional to this, not to the (possibly cancelled)
  // result. Acceptance margins must absorb that noise.
  virtual double value_scale() const = 0;
};

struct GenericModel final : ReducedModel {
  const CompositeObjective& f;
  const DsParametrization& p;
  GenericModel(const CompositeObjective& f_, const DsParametrization& p_)
      : f(f_), p(p_) {}

  double value(const Vector& theta) const override {
    return f.value(ds_map_point(p, theta));
  }
  double value_gradient(const Vector& theta, Vector& grad) const override {
    const Vector x = ds_map_point(p, theta);
    Vector gx;
    const double val = f.value_gradient(x, gx);
    grad = ds_adjoint_gradient(p, gx);
    return val;
  }
  double curvature_hint() const override { return 1.0; }
  double value_scale() const override { return 1.0; }
};

// Quadratic outer g(z) = scale * ||z - b||^2 and an affine map theta -> x
// give F(theta) = scale * (theta^T H theta - 2 rb^T theta + ||b||^2)
//              + q^T theta, with H = R^T R and R the composed linear map
// columns R e_i = A map(e_i). Everything is precomputed here.
struct QuadraticModel final : ReducedModel {
  Matrix h;      // p x p, R^T R
  Vector rb;     // R^T b
  Vector q;      // linear term from <c, map(e_i)>
  double bb = 0.0;
  double scale = 1.0;
  double lmax = 0.0;  // lambda_max(H) estimate

  QuadraticModel(const CompositeObjective& f, const DsParametrization& p) {
    const auto& outer = dynamic_cast<const QuadraticOuter&>(f.outer());
    scale = outer.quad_scale();
    const Vector& b = outer.b();
    bb = norm2sq(b);
    const std::size_t pd = theta_dim(p);
    const std::size_t m = f.map().rows();

    Matrix r(m, pd);  // columns are A map(e_i)
    q = Vector(pd);
    Vector e(pd);
    for (std::size_t j = 0; j < pd; ++j) {
      e[j] = 1.0;
      const Vector xj = ds_map_point(p, e);
      const Vector rj = f.map().apply(xj);
      for (std::size_t i = 0; i < m; ++i) r(i, j) = rj[i];
      if (f.has_linear_term()) q[j] = dot(f.linear_term(), xj);
      e[j] = 0.0;
    }
    h = Matrix(pd, pd);
    for (std::size_t a = 0; a < pd; ++a)
      for (std::size_t c = a; c < pd; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += r(i, a) * r(i, c);
        h(a, c) = h(c, a) = s;
      }
    rb = matvec_t(r, b);

    // Exact lambda_max(H): H is tiny, a dense eigensolve is free and a tight
    // initial step size avoids backtracking churn.
    lmax = 0.0;
    const SymEig eig = sym_eig(h);
    if (eig.values.size() > 0)
      lmax = std::max(0.0, eig.values[eig.values.size() - 1]);
  }

  static void scale_vec(Vector& v, double a) { ::kfw::scale(a, v); }

  double value(const Vector& theta) const override {
    const Vector ht = matvec(h, theta);
    return scale * (dot(theta, ht) - 2.0 * dot(rb, theta) + bb) +
           dot(q, theta);
  }
  double value_gradient(const Vector& theta, Vector& grad) const override {
    const Vector ht = matvec(h, theta);
    const double val =
        scale * (dot(theta, ht) - 2.0 * dot(rb, theta) + bb) + dot(q, theta);
    grad = Vector(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
      grad[i] = 2.0 * scale * (ht[i] - rb[i]) + q[i];
    return val;
  }
  double curvature_hint() const override {
    return std::max(2.0 * scale * lmax, 1e-12);
  }
  double value_scale() const override {
    return scale * (bb + lmax + 2.0 * norm2(rb)) + norm2(q) + 1.0;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Exact face polish for the quadratic path.
//
// Projected gradient identifies the optimal face quickly but crawls along it
// when the reduced Hessian is nearly singular (the anchor often sits almost
// inside the atom span, leaving a flat valley). On a fixed face the problem
// is an equality-constrained quadratic, which a tiny dense solve finishes to
// machine precision. Each polish round reads the active face off the current
// iterate, minimizes the quadratic over the face's affine hull (least-norm
// through an eigendecomposition, so flat directions are harmless), projects
// back into the domain, and keeps the point only if it improves. The
// accept-only-if-better guard keeps the step safe when the face guess is off.
// ---------------------------------------------------------------------------

namespace {

constexpr double kFaceTol = 1e-8;

// Spanning set for symmetric r x r matrices (traceless subspace on request).
std::vector<Matrix> sym_span(std::size_t r, bool traceless) {
  std::vector<Matrix> out;
  if (traceless) {
    for (std::size_t i = 0; i + 1 < r; ++i) {
      Matrix b(r, r);
      b(i, i) = 1.0;
      b(i + 1, i + 1) = -1.0;
      out.push_back(std::move(b));
    }
  } else {
    for (std::size_t i = 0; i < r; ++i) {
      Matrix b(r, r);
      b(i, i) = 1.0;
      out.push_back(std::move(b));
    }
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      Matrix b(r, r);
      b(i, j) = b(j, i) = 1.0;
      out.push_back(std::move(b));
    }
  return out;
}

// theta stays in the simplex along e_i - e_pivot for support coordinates.
void face_dirs(const ConvexHullDs&, const Vector& theta,
               std::vector<Vector>& out) {
  std::vector<std::size_t> sup;
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta[i] > kFaceTol) sup.push_back(i);
  for (std::size_t j = 1; j < sup.size(); ++j) {
    Vector d(theta.size());
    d[sup[j]] = 1.0;
    d[sup[0]] = -1.0;
    out.push_back(std::move(d));
  }
}

// Inside the ball every coordinate is free; on the boundary mass shifts
// between eta and the active groups along their (fixed) unit directions.
void face_dirs(const GroupSupportDs& g, const Vector& theta,
               std::vector<Vector>& out) {
  const std::size_t dim = theta.size();
  std::vector<std::size_t> offs(g.support.size());
  std::vector<double> rho(g.support.size());
  double total = std::max(0.0, theta[0]);
  std::size_t off = 1;
  for (std::size_t j = 0; j < g.support.size(); ++j) {
    offs[j] = off;
    double s = 0.0;
    for (std::size_t i = 0; i < g.support[j].size(); ++i)
      s += theta[off + i] * theta[off + i];
    rho[j] = std::sqrt(s);
    total += rho[j];
    off += g.support[j].size();
  }
  if (total < 1.0 - kFaceTol) {
    if (theta[0] > kFaceTol) {
      Vector d(dim);
      d[0] = 1.0;
      out.push_back(std::move(d));
    }
    for (std::size_t i = 1; i < dim; ++i) {
      Vector d(dim);
      d[i] = 1.0;
      out.push_back(std::move(d));
    }
    return;
  }
  Vector pivot;
  if (theta[0] > kFaceTol) {
    pivot = Vector(dim);
    pivot[0] = 1.0;
  }
  for (std::size_t j = 0; j < g.support.size(); ++j) {
    if (rho[j] <= kFaceTol) continue;
    Vector d(dim);
    for (std::size_t i = 0; i < g.support[j].size(); ++i)
      d[offs[j] + i] = theta[offs[j] + i] / rho[j];
    if (pivot.size() == 0) {
      pivot = std::move(d);
      continue;
    }
    out.push_back(d - pivot);
  }
}

// Per block: directions between the supported coordinates (and eta_j, whose
// weight in the block's mass equality is the anchor mass off the index set).
void face_dirs(const ScaledProductSimplicesDs& s, const Vector& theta,
               std::vector<Vector>& out) {
  const std::size_t dim = theta.size();
  std::size_t off = 0;
  for (std::size_t j = 0; j < s.blocks.size(); ++j) {
    const std::size_t m = s.index_sets[j].size();
    std::vector<std::pair<std::size_t, double>> sup;  // theta index, weight
    if (s.off_mass[j] > 0.0 && theta[off] > kFaceTol)
      sup.emplace_back(off, s.off_mass[j]);
    for (std::size_t i = 0; i < m; ++i)
      if (theta[off + 1 + i] > kFaceTol) sup.emplace_back(off + 1 + i, 1.0);
    for (std::size_t t = 1; t < sup.size(); ++t) {
      Vector d(dim);
      d[sup[t].first] = 1.0 / sup[t].second;
      d[sup[0].first] = -1.0 / sup[0].second;
      out.push_back(std::move(d));
    }
    off += 1 + m;
  }
}

// Face of {eta >= 0, S psd, eta + tr S = 1}: S moves inside the span of its
// positive eigenvectors; trace changes are balanced against eta when eta is
// positive, otherwise restricted to traceless perturbations.
void face_dirs(const SpectralSimplexDs& sd, const Vector& theta,
               std::vector<Vector>& out) {
  const std::size_t kk = sd.k();
  Matrix s(kk, kk);
  for (std::size_t r = 0; r < kk; ++r)
    for (std::size_t c = 0; c < kk; ++c)
      s(r, c) = 0.5 * (theta[1 + r * kk + c] + theta[1 + c * kk + r]);
  const SymEig eig = sym_eig(s);
  std::vector<std::size_t> act;
  for (std::size_t i = 0; i < eig.values.size(); ++i)
    if (eig.values[i] > kFaceTol) act.push_back(i);
  const std::size_t r = act.size();
  if (r == 0) return;
  Matrix basis(kk, r);
  for (std::size_t row = 0; row < kk; ++row)
    for (std::size_t c = 0; c < r; ++c) basis(row, c) = eig.vectors(row, act[c]);
  const bool eta_active = theta[0] > kFaceTol;
  for (const Matrix& b : sym_span(r, !eta_active)) {
    const Matrix ds = matmul(matmul(basis, b), basis.transposed());
    double tr = 0.0;
    for (std::size_t i = 0; i < r; ++i) tr += b(i, i);
    Vector d(theta.size());
    d[0] = eta_active ? -tr : 0.0;
    for (std::size_t i = 0; i < kk * kk; ++i) d[1 + i] = ds.data()[i];
    out.push_back(std::move(d));
  }
}

// Face of {eta >= 0, eta + ||S||_* <= 1}: free inside the ball; on the
// boundary S moves as P M Q^T over its positive singular pairs with the
// nuclear mass balanced against eta.
void face_dirs(const SpectralNuclearDs& nd, const Vector& theta,
               std::vector<Vector>& out) {
  const std::size_t kk = nd.k();
  const std::size_t dim = theta.size();
  Matrix s(kk, kk);
  for (std::size_t i = 0; i < kk * kk; ++i) s.data()[i] = theta[1 + i];
  const Svd dec = svd(s);
  double nuc = 0.0;
  for (std::size_t i = 0; i < dec.sigma.size(); ++i) nuc += dec.sigma[i];
  if (std::max(0.0, theta[0]) + nuc < 1.0 - kFaceTol) {
    if (theta[0] > kFaceTol) {
      Vector d(dim);
      d[0] = 1.0;
      out.push_back(std::move(d));
    }
    for (std::size_t i = 0; i < kk * kk; ++i) {
      Vector d(dim);
      d[1 + i] = 1.0;
      out.push_back(std::move(d));
    }
    return;
  }
  std::vector<std::size_t> act;
  for (std::size_t i = 0; i < dec.sigma.size(); ++i)
    if (dec.sigma[i] > kFaceTol) act.push_back(i);
  const std::size_t r = act.size();
  if (r == 0) return;
  Matrix pb(kk, r), qb(kk, r);
  for (std::size_t row = 0; row < kk; ++row)
    for (std::size_t c = 0; c < r; ++c) {
      pb(row, c) = dec.u(row, act[c]);
      qb(row, c) = dec.v(row, act[c]);
    }
  const bool eta_active = theta[0] > kFaceTol;
  for (const Matrix& b : sym_span(r, !eta_active)) {
    const Matrix ds = matmul(matmul(pb, b), qb.transposed());
    double tr = 0.0;
    for (std::size_t i = 0; i < r; ++i) tr += b(i, i);
    Vector d(dim);
    d[0] = eta_active ? -tr : 0.0;
    for (std::size_t i = 0; i < kk * kk; ++i) d[1 + i] = ds.data()[i];
    out.push_back(std::move(d));
  }
}

std::vector<Vector> face_directions(const DsParametrization& p,
                                    const Vector& theta) {
  std::vector<Vector> out;
  std::visit([&](const auto& v) { face_dirs(v, theta, out); }, p);
  return out;
}

}  // namespace

SubproblemResult apg_solve(const CompositeObjective& f,
                           const DsParametrization& p, const Vector& theta0,
                           const ApgConfig& cfg) {
  if (theta0.size() != theta_dim(p))
    throw param_error("apg_solve: theta0 dimension mismatch");

  const bool quad = f.outer().is_quadratic() && !cfg.force_generic;
  GenericModel generic(f, p);
  std::unique_ptr<QuadraticModel> qm;
  if (quad) qm = std::make_unique<QuadraticModel>(f, p);
  const ReducedModel& model =
      quad ? static_cast<const ReducedModel&>(*qm) : generic;

  Vector theta = ds_project_domain(p, theta0);
  double fx = model.value(theta);
  if (!std::isfinite(fx))
    throw numeric_error("apg_solve: non-finite objective at start");

  Vector best = theta;
  double best_val = fx;

  Vector y = theta;
  double t_mom = 1.0;
  double lip = model.curvature_hint();
  int streak = 0;
  int it = 1;
  bool converged = false;

  // Rounding noise in computed model values scales with the magnitude of the
  // intermediate terms, not the (often cancelled) result.
  const double noise = 1e-13 * model.value_scale();

  Vector grad;
  for (; it <= cfg.max_inner; ++it) {
    const double fy = model.value_gradient(y, grad);
    // Backtracking on the quadratic majorization around y.
    Vector cand;
    double fc = 0.0;
    bool stuck = false;
    for (;;) {
      cand = y;
      axpy(-1.0 / lip, grad, cand);
      cand = ds_project_domain(p, cand);
      const Vector d = cand - y;
      const double m = fy + dot(grad, d) + 0.5 * lip * norm2sq(d);
      fc = model.value(cand);
      if (!std::isfinite(fc))
        throw numeric_error("apg_solve: non-finite objective");
      if (fc <= m + 1e-12 * std::max(1.0, std::fabs(fc)) + noise) break;
      lip /= cfg.backtrack;
      if (lip > 1e18) {
        // progress is below rounding noise; take a zero step and wind down
        cand = y;
        fc = fy;
        stuck = true;
        break;
      }
    }

    const Vector prev = theta;
    theta = cand;
    double step = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i)
      step = std::max(step, std::fabs(theta[i] - prev[i]));
    const double rel =
        std::fabs(fx - fc) / std::max(std::fabs(fx), 1e-300);
    if (fc > fx + 1e-12 * std::max(1.0, std::fabs(fx))) {
      // objective went up: restart momentum from the new point
      y = theta;
      t_mom = 1.0;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
      y = theta;
      const double beta = (t_mom - 1.0) / t_next;
      for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += beta * (theta[i] - prev[i]);
      t_mom = t_next;
    }
    fx = fc;
    if (fc < best_val) {
      best_val = fc;
      best = theta;
    }
    // Converged only when the objective stagnates and the iterate stops
    // moving; the domain coordinates are unit-scaled, so an absolute step
    // tolerance is meaningful. A relative test alone is blind to objectives
    // with a large constant offset.
    const bool settled = rel < cfg.rel_tol && step <= cfg.step_tol;
    streak = stuck || settled ? streak + 1 : 0;
    if (streak >= cfg.small_change_streak) {
      converged = true;
      break;
    }
  }

  if (quad) {
    // Finish the solve with exact minimization over the active face.
    theta = best;
    fx = best_val;
    for (int round = 0; round < 5; ++round) {
      const std::vector<Vector> dirs = face_directions(p, theta);
      if (dirs.empty()) break;
      const std::size_t m = dirs.size();
      model.value_gradient(theta, grad);
      std::vector<Vector> hd(m);
      for (std::size_t b = 0; b < m; ++b) hd[b] = matvec(qm->h, dirs[b]);
      Matrix gram(m, m);
      Vector rhs(m);
      for (std::size_t a = 0; a < m; ++a) {
        rhs[a] = -dot(dirs[a], grad);
        for (std::size_t b = a; b < m; ++b)
          gram(a, b) = gram(b, a) = 2.0 * qm->scale * dot(dirs[a], hd[b]);
      }
      const SymEig eg = sym_eig(gram);
      const std::size_t ms = eg.values.size();
      const double gmax = ms > 0 ? eg.values[ms - 1] : 0.0;
      if (!(gmax > 0.0)) break;
      // Least-norm Newton step: drop eigendirections at rounding level, keep
      // genuinely small curvatures (they are the ones gradient descent cannot
      // traverse).
      const double cutoff = 1e-12 * gmax;
      Vector phi(m);
      for (std::size_t i = 0; i < ms; ++i) {
        if (eg.values[i] <= cutoff) continue;
        double coef = 0.0;
        for (std::size_t row = 0; row < m; ++row)
          coef += eg.vectors(row, i) * rhs[row];
        coef /= eg.values[i];
        for (std::size_t row = 0; row < m; ++row)
          phi[row] += coef * eg.vectors(row, i);
      }
      Vector delta(theta.size());
      for (std::size_t a = 0; a < m; ++a) axpy(phi[a], dirs[a], delta);
      // Flat valleys often exit the domain, putting the face minimizer far
      // outside it. Walk the projected ray toward it and keep the best
      // feasible point seen.
      Vector cand;
      double fc = std::numeric_limits<double>::infinity();
      double alpha = 1.0;
      for (int j = 0; j < 48; ++j, alpha *= 0.5) {
        Vector trial = theta;
        axpy(alpha, delta, trial);
        trial = ds_project_domain(p, trial);
        const double ft = model.value(trial);
        if (std::isfinite(ft) && ft < fc) {
          fc = ft;
          cand = std::move(trial);
        }
      }
      if (!std::isfinite(fc) || fc >= fx) break;
      theta = cand;
      fx = fc;
      if (fc < best_val) {
        best_val = fc;
        best = theta;
      }
    }
  }

  return SubproblemResult{std::move(best), best_val, std::min(it, cfg.max_inner),
                          converged};
}

double line_search(const CompositeObjective& f, const Vector& x,
                   const Vector& grad_x, const Vector& d, double gamma_max,
                   LineSearchMode mode) {
  if (!(gamma_max >= 0.0)) throw param_error("line_search: gamma_max < 0");
  if (gamma_max == 0.0) return 0.0;
  const double slope0 = dot(grad_x, d);

  const bool exact = mode == LineSearchMode::exact_quadratic ||
                     (mode == LineSearchMode::automatic &&
                      f.outer().is_quadratic());
  if (exact) {
    if (!f.outer().is_quadratic())
      throw param_error("line_search: exact mode needs a quadratic outer");
    // phi(g) = f(x + g d) is a parabola: phi'(0) = <grad, d>,
    // phi'' = 2 * scale * ||A d||^2 (constant).
    const auto& outer = dynamic_cast<const QuadraticOuter&>(f.outer());
    const Vector ad = f.map().apply(d);
    const double curv = 2.0 * outer.quad_scale() * norm2sq(ad);
    if (curv <= 0.0) return slope0 < 0.0 ? gamma_max : 0.0;
    return std::clamp(-slope0 / curv, 0.0, gamma_max);
  }

  // Bisection on phi'(gamma), monotone for convex f. 60 halvings pin the
  // step to ~1 ulp of gamma_max.
  if (slope0 >= 0.0) return 0.0;
  auto slope = [&](double g) {
    Vector xg = x;
    axpy(g, d, xg);
    return dot(f.gradient(xg), d);
  };
  if (slope(gamma_max) <= 0.0) return gamma_max;
  double lo = 0.0, hi = gamma_max;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace kfw
