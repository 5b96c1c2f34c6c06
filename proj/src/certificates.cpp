#include "kfw/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kfw/eig.hpp"
#include "kfw/errors.hpp"

namespace kfw {

double fw_gap(const CompositeObjective& f, const FeasibleSet& set,
              const Vector& x) {
  const Vector g = f.gradient(x);
  const Vector v = loo(set, g);
  return dot(g, x) - dot(g, v);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

SparsityInfo sparsity_measure(const FeasibleSet& set, const Vector& x,
                              double tol) {
  if (x.size() != ambient_dim(set))
    throw param_error("sparsity_measure: dimension mismatch");
  SparsityInfo info;
  std::visit(
      overloaded{
          [&](const Simplex&) {
            for (std::size_t i = 0; i < x.size(); ++i)
              if (std::fabs(x[i]) > tol) info.support.push_back(i);
            info.count = info.r = info.support.size();
          },
          [&](const L1Ball& s) {
            for (std::size_t i = 0; i < x.size(); ++i)
              if (std::fabs(x[i]) > tol * s.radius) info.support.push_back(i);
            info.count = info.r = info.support.size();
          },
          [&](const Hypercube&) {
            for (std::size_t i = 0; i < x.size(); ++i) {
              const double fr = std::min(std::fabs(x[i]),
                                         std::fabs(1.0 - x[i]));
              if (fr > tol) info.support.push_back(i);
            }
            info.count = info.support.size();
            info.r = info.count >= 63 ? std::size_t(1) << 62
                                      : std::size_t(1) << info.count;
          },
          [&](const ProductSimplices&) {
            for (std::size_t i = 0; i < x.size(); ++i)
              if (std::fabs(x[i]) > tol) info.support.push_back(i);
            info.count = info.r = info.support.size();
          },
          [&](const GroupNormBall& s) {
            for (std::size_t j = 0; j < s.groups.size(); ++j) {
              double b = 0.0;
              for (std::size_t i : s.groups[j]) b += x[i] * x[i];
              if (std::sqrt(b) > tol * s.radius) info.support.push_back(j);
            }
            info.count = info.r = info.support.size();
          },
          [&](const Spectrahedron& s) {
            info.count = info.r =
                numerical_rank(reshape(x, s.n, s.n), tol);
          },
          [&](const NuclearBall& s) {
            info.count = info.r =
                numerical_rank(reshape(x, s.n1, s.n2), tol);
          },
      },
      set);
  return info;
}

double delta_gap(const FeasibleSet& set, const Vector& grad, std::size_t r) {
  if (grad.size() != ambient_dim(set))
    throw param_error("delta_gap: dimension mismatch");
  if (r == 0) throw param_error("delta_gap: r must be >= 1");
  return std::visit(
      overloaded{
          [&](const Simplex&) {
            if (r >= grad.size())
              throw param_error("delta_gap: r too large for simplex");
            std::vector<double> v(grad.begin(), grad.end());
            std::sort(v.begin(), v.end());
            return v[r] - v[r - 1];
          },
          [&](const L1Ball& s) {
            if (r >= 2 * grad.size())
              throw param_error("delta_gap: r too large for l1 ball");
            std::vector<double> v;
            v.reserve(2 * grad.size());
            for (std::size_t i = 0; i < grad.size(); ++i) {
              v.push_back(s.radius * grad[i]);
              v.push_back(-s.radius * grad[i]);
            }
            std::sort(v.begin(), v.end());
            return v[r] - v[r - 1];
          },
          [&](const Hypercube& s) {
            if (s.n > 20)
              throw param_error("delta_gap: hypercube limited to n <= 20");
            const std::size_t total = std::size_t(1) << s.n;
            if (r >= total)
              throw param_error("delta_gap: r too large for hypercube");
            std::vector<double> v(total, 0.0);
            for (std::size_t mask = 0; mask < total; ++mask) {
              double sum = 0.0;
              for (std::size_t i = 0; i < s.n; ++i)
                if (mask & (std::size_t(1) << i)) sum += grad[i];
              v[mask] = sum;
            }
            std::sort(v.begin(), v.end());
            return v[r] - v[r - 1];
          },
          [&](const ProductSimplices&) -> double {
            throw param_error(
                "delta_gap: not provided for products of simplices");
          },
          [&](const GroupNormBall& s) {
            if (r >= s.groups.size())
              throw param_error("delta_gap: r too large for group ball");
            std::vector<double> norms(s.groups.size());
            for (std::size_t j = 0; j < s.groups.size(); ++j) {
              double b = 0.0;
              for (std::size_t i : s.groups[j]) b += grad[i] * grad[i];
              norms[j] = std::sqrt(b);
            }
            std::sort(norms.begin(), norms.end(), std::greater<double>());
            return norms[r - 1] - norms[r];
          },
          [&](const Spectrahedron& s) {
            if (r >= s.n)
              throw param_error("delta_gap: r too large for spectrahedron");
            Matrix g(s.n, s.n);
            for (std::size_t i = 0; i < s.n; ++i)
              for (std::size_t j = 0; j < s.n; ++j)
                g(i, j) = 0.5 * (grad[i * s.n + j] + grad[j * s.n + i]);
            const SymEig ed = sym_eig(g);
            return ed.values[r] - ed.values[r - 1];
          },
          [&](const NuclearBall& s) {
            const std::size_t mx = std::min(s.n1, s.n2);
            if (r >= mx)
              throw param_error("delta_gap: r too large for nuclear ball");
            const Svd sv = svd(reshape(grad, s.n1, s.n2));
            return sv.sigma[r - 1] - sv.sigma[r];
          },
      },
      set);
}

double probe_quadratic_growth(const CompositeObjective& f,
                              const FeasibleSet& set, const Vector& x_star,
                              double f_star, std::size_t n_samples,
                              std::uint64_t seed) {
  Rng rng(seed);
  double gamma = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& u) {
    const Vector d = u - x_star;
    const double dist2 = norm2sq(d);
    if (dist2 < 1e-18) return;
    const double ratio = (f.value(u) - f_star) / dist2;
    gamma = std::min(gamma, ratio);
  };
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Vector u = sample_feasible(set, rng);
    consider(u);
    // a point pulled toward the solution probes the local growth
    Vector near = x_star;
    Vector d = u - x_star;
    axpy(0.1, d, near);
    consider(near);
  }
  return gamma;
}

Certificate certify(const Problem& prob, const Vector& x, double rank_tol,
                    std::size_t growth_samples) {
  Certificate c;
  c.fw_gap = fw_gap(prob.objective, prob.set, x);
  c.sparsity = sparsity_measure(prob.set, x, rank_tol);
  c.smoothness = prob.objective.smoothness();
  c.diameter = diameter(prob.set);

  const Vector grad = prob.objective.gradient(x);
  const std::size_t r = c.sparsity.r;
  const bool delta_supported =
      !std::holds_alternative<ProductSimplices>(prob.set) &&
      !(std::holds_alternative<Hypercube>(prob.set) &&
        std::get<Hypercube>(prob.set).n > 20);
  if (delta_supported && r >= 1) {
    bool in_range = true;
    try {
      c.delta = delta_gap(prob.set, grad, r);
    } catch (const param_error&) {
      in_range = false;
    }
    if (!in_range) c.delta.reset();
  }

  const double fstar = prob.f_star ? *prob.f_star : prob.objective.value(x);
  c.gamma = probe_quadratic_growth(prob.objective, prob.set, x, fstar,
                                   growth_samples);
  if (c.delta && *c.delta > 0.0 && c.gamma > 0.0 &&
      std::isfinite(c.gamma)) {
    const double l = c.smoothness, d = c.diameter;
    c.t_bound = 4.0 * l * l * l * d * d * d * d /
                (c.gamma * (*c.delta) * (*c.delta));
  }
  return c;
}

}  // namespace kfw
