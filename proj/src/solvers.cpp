#include "kfw/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "kfw/errors.hpp"

namespace kfw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Minimizer atom of <v, grad> realized by a kloo output (best-first order).
// Group selections need the gradient to resolve the block direction.
Vector kloo_best_atom(const FeasibleSet& set, const KlooOutput& out,
                      const Vector& grad) {
  const std::size_t d = ambient_dim(set);
  if (const auto* vx = std::get_if<Vertices>(&out)) return vx->atoms.front();
  if (const auto* sc = std::get_if<SignedCoords>(&out)) {
    if (const auto* l1 = std::get_if<L1Ball>(&set)) {
      Vector a(d);
      a[sc->entries[0].first] = l1->radius * sc->entries[0].second;
      return a;
    }
    // products of simplices: the first selection of each block is its best
    const auto& ps = std::get<ProductSimplices>(set);
    Vector a(d);
    std::size_t off = 0, pos = 0;
    for (std::size_t b : ps.block_sizes) {
      a[sc->entries[pos].first] = 1.0;
      // skip this block's selections
      while (pos < sc->entries.size() && sc->entries[pos].first < off + b)
        ++pos;
      off += b;
    }
    return a;
  }
  if (const auto* gr = std::get_if<Groups>(&out)) {
    const auto& gb = std::get<GroupNormBall>(set);
    const auto& g = gb.groups[gr->ids[0]];
    double nb = 0.0;
    for (std::size_t i : g) nb += grad[i] * grad[i];
    nb = std::sqrt(nb);
    Vector a(d);
    if (nb > 0.0) {
      const double c = -gb.radius / nb;
      for (std::size_t i : g) a[i] = c * grad[i];
    } else {
      a[g[0]] = gb.radius;
    }
    return a;
  }
  if (const auto* eb = std::get_if<EigBasis>(&out)) {
    const auto& sp = std::get<Spectrahedron>(set);
    Vector a(d);
    for (std::size_t r = 0; r < sp.n; ++r)
      for (std::size_t c = 0; c < sp.n; ++c)
        a[r * sp.n + c] = eb->v(r, 0) * eb->v(c, 0);
    return a;
  }
  const auto& sb = std::get<SingularBases>(out);
  const auto& nb = std::get<NuclearBall>(set);
  Vector a(d);
  for (std::size_t r = 0; r < nb.n1; ++r)
    for (std::size_t c = 0; c < nb.n2; ++c)
      a[r * nb.n2 + c] = -nb.radius * sb.u(r, 0) * sb.v(c, 0);
  return a;
}

struct StepOutcome {
  Vector x_next;
  double f_next = 0.0;
  double gap = 0.0;
  std::size_t k_used = 1;
  double kloo_s = 0.0;
  double kds_s = 0.0;
};

struct LoopState {
  Vector x;
  double f = 0.0;
  std::vector<double> f_history;  // f(x_0), f(x_1), ...
};

class Driver {
 public:
  Driver(const Problem& prob, const SolverConfig& cfg)
      : prob_(prob), cfg_(cfg) {}

  template <typename Stepper>
  SolveTrace run(Stepper&& stepper) {
    const auto t0 = Clock::now();
    SolveTrace tr;
    LoopState st;
    st.x = prob_.start();
    if (!contains(prob_.set, st.x, 1e-7))
      throw param_error("solve: start point is not feasible");
    st.f = prob_.objective.value(st.x);
    st.f_history.push_back(st.f);

    IterationRecord r0;
    r0.iter = 0;
    r0.objective = st.f;
    r0.fw_gap = std::numeric_limits<double>::quiet_NaN();
    r0.k_used = cfg_.k;
    r0.support_size = sparsity_measure(prob_.set, st.x).count;
    tr.iterations.push_back(r0);

    bool gap_pending = true;  // last record's fw_gap not yet known
    for (std::size_t t = 1; t <= cfg_.max_iter; ++t) {
      const Vector grad = prob_.objective.gradient(st.x);
      StepOutcome out = stepper(st, grad, t);
      tr.kloo_seconds += out.kloo_s;
      tr.kds_seconds += out.kds_s;

      // the oracle just measured the gap at the *current* iterate
      tr.iterations.back().fw_gap = out.gap;
      gap_pending = false;
      if (cfg_.fw_gap_tol > 0.0 && out.gap <= cfg_.fw_gap_tol) {
        tr.converged = true;
        tr.stop_reason = "fw_gap";
        break;
      }

      // enforce monotone descent: reject steps that go up
      if (out.f_next > st.f + 1e-12 * std::max(1.0, std::fabs(st.f))) {
        out.x_next = st.x;
        out.f_next = st.f;
      }
      const double rel =
          std::fabs(st.f - out.f_next) / std::max(std::fabs(st.f), 1e-300);
      st.x = std::move(out.x_next);
      st.f = out.f_next;
      st.f_history.push_back(st.f);

      IterationRecord r;
      r.iter = t;
      r.elapsed_s = seconds_since(t0);
      r.objective = st.f;
      r.fw_gap = std::numeric_limits<double>::quiet_NaN();
      r.rel_change = rel;
      r.k_used = out.k_used;
      r.support_size = sparsity_measure(prob_.set, st.x).count;
      r.kloo_s = out.kloo_s;
      r.kds_s = out.kds_s;
      tr.iterations.push_back(r);
      gap_pending = true;

      if (rel < cfg_.rel_change_tol) {
        tr.converged = true;
        tr.stop_reason = "rel_change";
        break;
      }
    }
    if (tr.stop_reason.empty()) tr.stop_reason = "max_iter";

    if (gap_pending) {
      // one bookkeeping oracle call so the final record carries its gap
      const Vector grad = prob_.objective.gradient(st.x);
      const Vector v = loo(prob_.set, grad);
      tr.iterations.back().fw_gap = dot(grad, st.x) - dot(grad, v);
    }
    tr.solution = st.x;
    tr.objective = st.f;
    tr.total_seconds = seconds_since(t0);
    return tr;
  }

 private:
  const Problem& prob_;
  const SolverConfig& cfg_;
};

// ---------------------------------------------------------------------------
// steppers
// ---------------------------------------------------------------------------

StepOutcome fw_step(const Problem& prob, const SolverConfig& cfg,
                    const LoopState& st, const Vector& grad) {
  StepOutcome out;
  auto t0 = Clock::now();
  const Vector v = loo(prob.set, grad);
  out.kloo_s = seconds_since(t0);
  out.gap = dot(grad, st.x) - dot(grad, v);
  out.k_used = 1;

  t0 = Clock::now();
  const Vector d = v - st.x;
  const double gamma =
      line_search(prob.objective, st.x, grad, d, 1.0, cfg.line_search);
  out.x_next = st.x;
  axpy(gamma, d, out.x_next);
  out.f_next = prob.objective.value(out.x_next);
  out.kds_s = seconds_since(t0);
  return out;
}

StepOutcome kfw_step(const Problem& prob, const SolverConfig& cfg,
                     const LoopState& st, const Vector& grad, std::size_t k) {
  StepOutcome out;
  auto t0 = Clock::now();
  const KlooOutput kl = kloo(prob.set, grad, k);
  out.kloo_s = seconds_since(t0);
  const Vector best = kloo_best_atom(prob.set, kl, grad);
  out.gap = dot(grad, st.x) - dot(grad, best);
  out.k_used = k;

  t0 = Clock::now();
  const DsParametrization ds = build_ds(prob.set, st.x, kl);
  const SubproblemResult sub =
      apg_solve(prob.objective, ds, theta0(ds), cfg.apg);
  out.x_next = ds_map_point(ds, sub.theta);
  out.f_next = prob.objective.value(out.x_next);
  out.kds_s = seconds_since(t0);
  return out;
}

// memory of recent oracle atoms: exact-duplicate push refreshes recency
void memory_push(std::vector<Vector>& mem, const Vector& atom,
                 std::size_t capacity) {
  if (capacity == 0) return;
  for (auto it = mem.begin(); it != mem.end(); ++it) {
    if (*it == atom) {
      mem.erase(it);
      break;
    }
  }
  mem.push_back(atom);
  if (mem.size() > capacity) mem.erase(mem.begin());
}

StepOutcome limited_memory_step(const Problem& prob, const SolverConfig& cfg,
                                const LoopState& st, const Vector& grad,
                                std::vector<Vector>& mem, bool k_best) {
  StepOutcome out;
  std::vector<Vector> candidates;
  auto t0 = Clock::now();
  if (k_best) {
    const KlooOutput kl = kloo(prob.set, grad, cfg.k);
    out.kloo_s = seconds_since(t0);
    candidates = kloo_atoms(prob.set, kl);
    const Vector best = kloo_best_atom(prob.set, kl, grad);
    out.gap = dot(grad, st.x) - dot(grad, best);
    out.k_used = cfg.k;
  } else {
    candidates.push_back(loo(prob.set, grad));
    out.kloo_s = seconds_since(t0);
    out.gap = dot(grad, st.x) - dot(grad, candidates[0]);
    out.k_used = 1;
  }

  t0 = Clock::now();
  ConvexHullDs ds;
  ds.anchor = st.x;
  auto add_atom = [&](const Vector& a) {
    if (a == ds.anchor) return;
    for (const auto& b : ds.atoms)
      if (b == a) return;
    ds.atoms.push_back(a);
  };
  for (const auto& a : candidates) add_atom(a);
  for (auto it = mem.rbegin(); it != mem.rend(); ++it) add_atom(*it);

  const DsParametrization p = DsParametrization(std::move(ds));
  const SubproblemResult sub =
      apg_solve(prob.objective, p, theta0(p), cfg.apg);
  out.x_next = ds_map_point(p, sub.theta);
  out.f_next = prob.objective.value(out.x_next);
  out.kds_s = seconds_since(t0);

  const std::size_t capacity =
      cfg.memory == static_cast<std::size_t>(-1) ? cfg.k - 1 : cfg.memory;
  memory_push(mem, candidates[0], capacity);
  return out;
}

struct ActiveSet {
  std::vector<Vector> atoms;
  std::vector<double> weights;

  void add(const Vector& v, double w) {
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (atoms[j] == v) {
        weights[j] += w;
        return;
      }
    }
    atoms.push_back(v);
    weights.push_back(w);
  }

  void prune_and_renormalize() {
    double sum = 0.0;
    std::size_t out = 0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (weights[j] > 1e-12) {
        if (out != j) {
          atoms[out] = std::move(atoms[j]);
          weights[out] = weights[j];
        }
        sum += weights[out];
        ++out;
      }
    }
    atoms.resize(out);
    weights.resize(out);
    if (sum > 0.0)
      for (double& w : weights) w /= sum;
  }

  Vector combination(std::size_t dim) const {
    Vector x(dim);
    for (std::size_t j = 0; j < atoms.size(); ++j)
      axpy(weights[j], atoms[j], x);
    return x;
  }
};

StepOutcome vertex_variant_step(const Problem& prob, const SolverConfig& cfg,
                                const LoopState& st, const Vector& grad,
                                ActiveSet& active, bool pairwise,
                                std::size_t t) {
  StepOutcome out;
  auto t0 = Clock::now();
  const Vector v = loo(prob.set, grad);
  out.kloo_s = seconds_since(t0);
  out.gap = dot(grad, st.x) - dot(grad, v);
  out.k_used = 1;

  t0 = Clock::now();
  // worst active atom under the gradient (tie: smaller index)
  std::size_t aw = 0;
  double aw_val = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < active.atoms.size(); ++j) {
    const double val = dot(grad, active.atoms[j]);
    if (val > aw_val) {
      aw_val = val;
      aw = j;
    }
  }

  Vector x_next;
  if (pairwise) {
    const Vector d = v - active.atoms[aw];
    const double gmax = active.weights[aw];
    const double gamma =
        line_search(prob.objective, st.x, grad, d, gmax, cfg.line_search);
    x_next = st.x;
    axpy(gamma, d, x_next);
    active.weights[aw] -= gamma;
    active.add(v, gamma);
  } else {
    const Vector d_fw = v - st.x;
    const Vector d_aw = st.x - active.atoms[aw];
    const bool use_fw = dot(grad, d_fw) <= dot(grad, d_aw);
    if (use_fw) {
      const double gamma =
          line_search(prob.objective, st.x, grad, d_fw, 1.0, cfg.line_search);
      x_next = st.x;
      axpy(gamma, d_fw, x_next);
      for (double& w : active.weights) w *= (1.0 - gamma);
      active.add(v, gamma);
    } else {
      const double waw = active.weights[aw];
      const double gmax = waw < 1.0 - 1e-15 ? waw / (1.0 - waw) : 0.0;
      const double gamma =
          line_search(prob.objective, st.x, grad, d_aw, gmax, cfg.line_search);
      x_next = st.x;
      axpy(gamma, d_aw, x_next);
      for (double& w : active.weights) w *= (1.0 + gamma);
      active.weights[aw] -= gamma;
    }
  }
  active.prune_and_renormalize();
  // periodically resync the iterate with its convex representation to stop
  // floating point drift between the two bookkeeping paths
  if (t % 64 == 0) x_next = active.combination(x_next.size());
  out.x_next = std::move(x_next);
  out.f_next = prob.objective.value(out.x_next);
  out.kds_s = seconds_since(t0);
  return out;
}

void validate_config(const Problem& prob, const SolverConfig& cfg) {
  validate_set(prob.set);
  if (cfg.max_iter == 0) throw param_error("solver: max_iter must be >= 1");
  if (cfg.rel_change_tol < 0.0 || cfg.fw_gap_tol < 0.0)
    throw param_error("solver: tolerances must be >= 0");
  const std::size_t limit = max_k(prob.set);
  const bool needs_k = cfg.algorithm == Algorithm::kfw ||
                       cfg.algorithm == Algorithm::kfw_adaptive ||
                       cfg.algorithm == Algorithm::lfw ||
                       cfg.algorithm == Algorithm::lkfw;
  if (needs_k && (cfg.k == 0 || cfg.k > limit))
    throw param_error("solver: k out of range for this set");
  if (cfg.algorithm == Algorithm::kfw_adaptive && !(cfg.adapt_sigma > 1.0))
    throw param_error("solver: adaptive growth factor must exceed 1");
  if ((cfg.algorithm == Algorithm::away_fw ||
       cfg.algorithm == Algorithm::pairwise_fw) &&
      !vertex_representable(prob.set))
    throw param_error(
        "solver: away/pairwise variants need a vertex-representable polytope");
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::fw: return "fw";
    case Algorithm::kfw: return "kfw";
    case Algorithm::kfw_adaptive: return "kfw_adaptive";
    case Algorithm::lfw: return "lfw";
    case Algorithm::lkfw: return "lkfw";
    case Algorithm::away_fw: return "away_fw";
    case Algorithm::pairwise_fw: return "pairwise_fw";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "fw") return Algorithm::fw;
  if (name == "kfw") return Algorithm::kfw;
  if (name == "kfw_adaptive") return Algorithm::kfw_adaptive;
  if (name == "lfw") return Algorithm::lfw;
  if (name == "lkfw") return Algorithm::lkfw;
  if (name == "away_fw") return Algorithm::away_fw;
  if (name == "pairwise_fw") return Algorithm::pairwise_fw;
  throw param_error("unknown algorithm: " + name);
}

SolveTrace solve(const Problem& prob, const SolverConfig& cfg) {
  validate_config(prob, cfg);
  Driver driver(prob, cfg);

  switch (cfg.algorithm) {
    case Algorithm::fw:
      return driver.run([&](const LoopState& st, const Vector& grad,
                            std::size_t) { return fw_step(prob, cfg, st, grad); });

    case Algorithm::kfw:
      return driver.run([&](const LoopState& st, const Vector& grad,
                            std::size_t) {
        return kfw_step(prob, cfg, st, grad, cfg.k);
      });

    case Algorithm::kfw_adaptive: {
      // Doubling schedule: the first two steps run at k0, the third applies
      // the growth factor unconditionally, and k then keeps growing while the
      // relative decrease improves; frozen afterwards (also when the cap
      // binds or an objective is too small to compare). With factor 2 from
      // k0=1 the per-step sequence reads 1, 1, 2, 4, ... while improving.
      std::size_t k = cfg.k;
      bool increasing = true;
      const std::size_t cap =
          std::min(cfg.k_max == 0 ? max_k(prob.set) : cfg.k_max,
                   max_k(prob.set));
      return driver.run([&, cap](const LoopState& st, const Vector& grad,
                                 std::size_t t) {
        if (increasing && t >= 3) {
          bool grow = t == 3;
          if (t > 3) {
            const auto& fh = st.f_history;  // f(x_0) .. f(x_{t-1})
            const double f3 = fh[t - 3], f2 = fh[t - 2], f1 = fh[t - 1];
            if (f3 <= 1e-300 || f2 <= 1e-300) {
              increasing = false;
            } else {
              grow = (f2 - f1) / f2 > (f3 - f2) / f3;
              if (!grow) increasing = false;
            }
          }
          if (increasing && grow) {
            const std::size_t next = static_cast<std::size_t>(
                std::ceil(cfg.adapt_sigma * static_cast<double>(k)));
            k = std::max(k + 1, next);
            if (k >= cap) {
              k = cap;
              increasing = false;
            }
          }
        }
        return kfw_step(prob, cfg, st, grad, k);
      });
    }

    case Algorithm::lfw:
    case Algorithm::lkfw: {
      std::vector<Vector> memory;
      const bool k_best = cfg.algorithm == Algorithm::lkfw;
      return driver.run([&, k_best](const LoopState& st, const Vector& grad,
                                    std::size_t) {
        return limited_memory_step(prob, cfg, st, grad, memory, k_best);
      });
    }

    case Algorithm::away_fw:
    case Algorithm::pairwise_fw: {
      ActiveSet active;
      active.atoms.push_back(prob.start());
      active.weights.push_back(1.0);
      const bool pw = cfg.algorithm == Algorithm::pairwise_fw;
      return driver.run([&, pw](const LoopState& st, const Vector& grad,
                                std::size_t t) {
        return vertex_variant_step(prob, cfg, st, grad, active, pw, t);
      });
    }
  }
  throw param_error("solve: unhandled algorithm");
}

}  // namespace kfw
