#include "kfw/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "kfw/eig.hpp"
#include "kfw/errors.hpp"
#include "kfw/select.hpp"

namespace kfw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t group_dim(const GroupNormBall& s) {
  std::size_t d = 0;
  for (const auto& g : s.groups) d += g.size();
  return d;
}

void validate_groups(const GroupNormBall& s) {
  const std::size_t d = group_dim(s);
  std::vector<char> seen(d, 0);
  for (const auto& g : s.groups) {
    if (g.empty()) throw param_error("GroupNormBall: empty group");
    for (std::size_t i : g) {
      if (i >= d || seen[i])
        throw param_error("GroupNormBall: groups must partition coordinates");
      seen[i] = 1;
    }
  }
  if (!(s.radius > 0.0)) throw param_error("GroupNormBall: radius must be > 0");
}

bool zero_gradient(const Vector& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] != 0.0) return false;
  return true;
}

Matrix symmetrized(const Matrix& a) {
  Matrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

// --- hypercube k-best vertex enumeration ------------------------------------
//
// Vertices are scored by <v, grad> = sum over chosen coordinates of grad_i.
// The best vertex picks exactly the negative coordinates; every deviation
// flips some coordinate i at cost |grad_i| >= 0. Enumerating the k cheapest
// flip sets is the classic k-smallest-subset-sum scheme: sort costs
// ascending, then grow a frontier where a node with last sorted position j
// spawns "append j+1" and "replace j by j+1". Each subset appears once.
// Ties are broken by the lexicographically smallest flip set (in sorted-cost
// positions), which makes the output deterministic.
struct FlipNode {
  double cost;
  std::vector<std::size_t> flips;  // positions into the sorted cost order
};

struct FlipNodeGreater {
  bool operator()(const FlipNode& a, const FlipNode& b) const {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.flips > b.flips;  // lexicographic
  }
};

std::vector<Vector> hypercube_k_best(const Vector& grad, std::size_t k) {
  const std::size_t n = grad.size();
  Vector base(n);
  std::vector<double> cost(n);
  for (std::size_t i = 0; i < n; ++i) {
    base[i] = grad[i] < 0.0 ? 1.0 : 0.0;
    cost[i] = std::fabs(grad[i]);
  }
  // ascending cost with index tie-break
  std::vector<std::size_t> order = select_k_smallest(cost.data(), n, n);

  std::vector<Vector> out;
  out.reserve(k);
  out.push_back(base);
  if (k == 1) return out;

  std::priority_queue<FlipNode, std::vector<FlipNode>, FlipNodeGreater> heap;
  heap.push(FlipNode{cost[order[0]], {0}});
  while (out.size() < k && !heap.empty()) {
    FlipNode node = heap.top();
    heap.pop();
    Vector v = base;
    for (std::size_t pos : node.flips) {
      const std::size_t i = order[pos];
      v[i] = 1.0 - v[i];
    }
    out.push_back(std::move(v));
    const std::size_t last = node.flips.back();
    if (last + 1 < n) {
      FlipNode ext{node.cost + cost[order[last + 1]], node.flips};
      ext.flips.push_back(last + 1);
      heap.push(std::move(ext));
      FlipNode sub{node.cost - cost[order[last]] + cost[order[last + 1]],
                   node.flips};
      sub.flips.back() = last + 1;
      heap.push(std::move(sub));
    }
  }
  return out;
}

std::vector<std::size_t> product_offsets(const ProductSimplices& s) {
  std::vector<std::size_t> off(s.block_sizes.size() + 1, 0);
  for (std::size_t j = 0; j < s.block_sizes.size(); ++j)
    off[j + 1] = off[j] + s.block_sizes[j];
  return off;
}

}  // namespace

void validate_set(const FeasibleSet& set) {
  std::visit(overloaded{
                 [](const Simplex& s) {
                   if (s.n == 0) throw param_error("Simplex: n must be > 0");
                 },
                 [](const L1Ball& s) {
                   if (s.n == 0 || !(s.radius > 0.0))
                     throw param_error("L1Ball: need n > 0 and radius > 0");
                 },
                 [](const Hypercube& s) {
                   if (s.n == 0) throw param_error("Hypercube: n must be > 0");
                 },
                 [](const ProductSimplices& s) {
                   if (s.block_sizes.empty())
                     throw param_error("ProductSimplices: no blocks");
                   for (std::size_t b : s.block_sizes)
                     if (b == 0)
                       throw param_error("ProductSimplices: empty block");
                 },
                 [](const GroupNormBall& s) { validate_groups(s); },
                 [](const Spectrahedron& s) {
                   if (s.n == 0)
                     throw param_error("Spectrahedron: n must be > 0");
                 },
                 [](const NuclearBall& s) {
                   if (s.n1 == 0 || s.n2 == 0 || !(s.radius > 0.0))
                     throw param_error(
                         "NuclearBall: need dims > 0 and radius > 0");
                 },
             },
             set);
}

// --- dimensions / geometry ---------------------------------------------------

std::size_t ambient_dim(const FeasibleSet& set) {
  return std::visit(
      overloaded{
          [](const Simplex& s) { return s.n; },
          [](const L1Ball& s) { return s.n; },
          [](const Hypercube& s) { return s.n; },
          [](const ProductSimplices& s) {
            std::size_t d = 0;
            for (std::size_t b : s.block_sizes) d += b;
            return d;
          },
          [](const GroupNormBall& s) { return group_dim(s); },
          [](const Spectrahedron& s) { return s.n * s.n; },
          [](const NuclearBall& s) { return s.n1 * s.n2; },
      },
      set);
}

double diameter(const FeasibleSet& set) {
  return std::visit(
      overloaded{
          [](const Simplex&) { return std::sqrt(2.0); },
          [](const L1Ball& s) { return 2.0 * s.radius; },
          [](const Hypercube& s) { return std::sqrt(double(s.n)); },
          [](const ProductSimplices& s) {
            return std::sqrt(2.0 * double(s.block_sizes.size()));
          },
          [](const GroupNormBall& s) { return 2.0 * s.radius; },
          [](const Spectrahedron&) { return std::sqrt(2.0); },
          [](const NuclearBall& s) { return 2.0 * s.radius; },
      },
      set);
}

bool contains(const FeasibleSet& set, const Vector& x, double tol) {
  if (x.size() != ambient_dim(set)) return false;
  return std::visit(
      overloaded{
          [&](const Simplex&) {
            double sum = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
              if (x[i] < -tol) return false;
              sum += x[i];
            }
            return std::fabs(sum - 1.0) <= tol * x.size();
          },
          [&](const L1Ball& s) {
            double sum = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) sum += std::fabs(x[i]);
            return sum <= s.radius + tol * std::max(1.0, s.radius);
          },
          [&](const Hypercube&) {
            for (std::size_t i = 0; i < x.size(); ++i)
              if (x[i] < -tol || x[i] > 1.0 + tol) return false;
            return true;
          },
          [&](const ProductSimplices& s) {
            const auto off = product_offsets(s);
            for (std::size_t j = 0; j < s.block_sizes.size(); ++j) {
              double sum = 0.0;
              for (std::size_t i = off[j]; i < off[j + 1]; ++i) {
                if (x[i] < -tol) return false;
                sum += x[i];
              }
              if (std::fabs(sum - 1.0) > tol * s.block_sizes[j]) return false;
            }
            return true;
          },
          [&](const GroupNormBall& s) {
            double sum = 0.0;
            for (const auto& g : s.groups) {
              double b = 0.0;
              for (std::size_t i : g) b += x[i] * x[i];
              sum += std::sqrt(b);
            }
            return sum <= s.radius + tol * std::max(1.0, s.radius);
          },
          [&](const Spectrahedron& s) {
            Matrix m = reshape(x, s.n, s.n);
            if (m.max_abs_asymmetry() > tol * std::max(1.0, frob_norm(m)))
              return false;
            const SymEig ed = sym_eig(symmetrized(m));
            double tr = 0.0;
            for (std::size_t i = 0; i < s.n; ++i) tr += ed.values[i];
            return ed.values[0] >= -tol && std::fabs(tr - 1.0) <= tol * s.n;
          },
          [&](const NuclearBall& s) {
            const Svd sv = svd(reshape(x, s.n1, s.n2));
            double sum = 0.0;
            for (std::size_t i = 0; i < sv.sigma.size(); ++i)
              sum += sv.sigma[i];
            return sum <= s.radius + tol * std::max(1.0, s.radius);
          },
      },
      set);
}

Vector canonical_vertex(const FeasibleSet& set) {
  const std::size_t d = ambient_dim(set);
  Vector x(d);
  std::visit(overloaded{
                 [&](const Simplex&) { x[0] = 1.0; },
                 [&](const L1Ball& s) { x[0] = s.radius; },
                 [&](const Hypercube&) { /* zero vertex */ },
                 [&](const ProductSimplices& s) {
                   const auto off = product_offsets(s);
                   for (std::size_t j = 0; j < s.block_sizes.size(); ++j)
                     x[off[j]] = 1.0;
                 },
                 [&](const GroupNormBall& s) { x[s.groups[0][0]] = s.radius; },
                 [&](const Spectrahedron&) { x[0] = 1.0; },  // e1 e1^T
                 [&](const NuclearBall& s) { x[0] = s.radius; },
             },
             set);
  return x;
}

std::size_t max_k(const FeasibleSet& set) {
  return std::visit(
      overloaded{
          [](const Simplex& s) { return s.n; },
          [](const L1Ball& s) { return s.n; },
          [](const Hypercube& s) {
            return s.n >= 63 ? std::size_t(1) << 62
                             : (std::size_t(1) << s.n);
          },
          [](const ProductSimplices& s) {
            std::size_t m = 0;
            for (std::size_t b : s.block_sizes) m = std::max(m, b);
            return m;
          },
          [](const GroupNormBall& s) { return s.groups.size(); },
          [](const Spectrahedron& s) { return s.n; },
          [](const NuclearBall& s) { return std::min(s.n1, s.n2); },
      },
      set);
}

bool vertex_representable(const FeasibleSet& set) {
  return std::holds_alternative<Simplex>(set) ||
         std::holds_alternative<L1Ball>(set) ||
         std::holds_alternative<Hypercube>(set) ||
         std::holds_alternative<ProductSimplices>(set);
}

std::string set_family_name(const FeasibleSet& set) {
  return std::visit(
      overloaded{
          [](const Simplex&) { return std::string("simplex"); },
          [](const L1Ball&) { return std::string("l1_ball"); },
          [](const Hypercube&) { return std::string("hypercube"); },
          [](const ProductSimplices&) {
            return std::string("product_simplices");
          },
          [](const GroupNormBall&) { return std::string("group_norm_ball"); },
          [](const Spectrahedron&) { return std::string("spectrahedron"); },
          [](const NuclearBall&) { return std::string("nuclear_ball"); },
      },
      set);
}

// --- linear optimization oracles ---------------------------------------------

Vector loo(const FeasibleSet& set, const Vector& grad) {
  if (grad.size() != ambient_dim(set))
    throw param_error("loo: gradient dimension mismatch");
  if (zero_gradient(grad)) return canonical_vertex(set);
  const std::size_t d = grad.size();
  return std::visit(
      overloaded{
          [&](const Simplex&) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < d; ++i)
              if (grad[i] < grad[best]) best = i;
            Vector v(d);
            v[best] = 1.0;
            return v;
          },
          [&](const L1Ball& s) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < d; ++i)
              if (std::fabs(grad[i]) > std::fabs(grad[best])) best = i;
            Vector v(d);
            v[best] = grad[best] > 0.0 ? -s.radius : s.radius;
            return v;
          },
          [&](const Hypercube&) {
            Vector v(d);
            for (std::size_t i = 0; i < d; ++i) v[i] = grad[i] < 0.0 ? 1.0 : 0.0;
            return v;
          },
          [&](const ProductSimplices& s) {
            const auto off = product_offsets(s);
            Vector v(d);
            for (std::size_t j = 0; j < s.block_sizes.size(); ++j) {
              std::size_t best = off[j];
              for (std::size_t i = off[j] + 1; i < off[j + 1]; ++i)
                if (grad[i] < grad[best]) best = i;
              v[best] = 1.0;
            }
            return v;
          },
          [&](const GroupNormBall& s) {
            std::size_t best = 0;
            double best_norm = -1.0;
            std::vector<double> norms(s.groups.size());
            for (std::size_t j = 0; j < s.groups.size(); ++j) {
              double b = 0.0;
              for (std::size_t i : s.groups[j]) b += grad[i] * grad[i];
              norms[j] = std::sqrt(b);
              if (norms[j] > best_norm) {
                best_norm = norms[j];
                best = j;
              }
            }
            Vector v(d);
            if (best_norm > 0.0) {
              const double c = -s.radius / best_norm;
              for (std::size_t i : s.groups[best]) v[i] = c * grad[i];
            } else {
              v[s.groups[best][0]] = s.radius;
            }
            return v;
          },
          [&](const Spectrahedron& s) {
            const SymEig ed =
                eig_bottom_k(symmetrized(reshape(grad, s.n, s.n)), 1);
            Vector v(d);
            for (std::size_t r = 0; r < s.n; ++r)
              for (std::size_t c = 0; c < s.n; ++c)
                v[r * s.n + c] = ed.vectors(r, 0) * ed.vectors(c, 0);
            return v;
          },
          [&](const NuclearBall& s) {
            const Svd sv = svd_top_k(reshape(grad, s.n1, s.n2), 1);
            Vector v(d);
            for (std::size_t r = 0; r < s.n1; ++r)
              for (std::size_t c = 0; c < s.n2; ++c)
                v[r * s.n2 + c] = -s.radius * sv.u(r, 0) * sv.v(c, 0);
            return v;
          },
      },
      set);
}

KlooOutput kloo(const FeasibleSet& set, const Vector& grad, std::size_t k) {
  if (grad.size() != ambient_dim(set))
    throw param_error("kloo: gradient dimension mismatch");
  if (k == 0 || k > max_k(set))
    throw param_error("kloo: k out of range for this set");
  return std::visit(
      overloaded{
          [&](const Simplex&) -> KlooOutput {
            const auto idx = select_k_smallest(grad.data(), grad.size(), k);
            Vertices out;
            for (std::size_t i : idx) {
              Vector v(grad.size());
              v[i] = 1.0;
              out.atoms.push_back(std::move(v));
            }
            return out;
          },
          [&](const L1Ball&) -> KlooOutput {
            std::vector<double> neg(grad.size());
            for (std::size_t i = 0; i < grad.size(); ++i)
              neg[i] = -std::fabs(grad[i]);
            const auto idx = select_k_smallest(neg.data(), neg.size(), k);
            SignedCoords out;
            for (std::size_t i : idx)
              out.entries.emplace_back(i, grad[i] > 0.0 ? -1 : 1);
            return out;
          },
          [&](const Hypercube&) -> KlooOutput {
            return Vertices{hypercube_k_best(grad, k)};
          },
          [&](const ProductSimplices& s) -> KlooOutput {
            const auto off = product_offsets(s);
            SignedCoords out;
            for (std::size_t j = 0; j < s.block_sizes.size(); ++j) {
              const std::size_t kj = std::min(k, s.block_sizes[j]);
              const auto idx =
                  select_k_smallest(grad.data() + off[j], s.block_sizes[j], kj);
              for (std::size_t i : idx) out.entries.emplace_back(off[j] + i, 1);
            }
            return out;
          },
          [&](const GroupNormBall& s) -> KlooOutput {
            std::vector<double> neg(s.groups.size());
            for (std::size_t j = 0; j < s.groups.size(); ++j) {
              double b = 0.0;
              for (std::size_t i : s.groups[j]) b += grad[i] * grad[i];
              neg[j] = -std::sqrt(b);
            }
            return Groups{select_k_smallest(neg.data(), neg.size(), k)};
          },
          [&](const Spectrahedron& s) -> KlooOutput {
            const SymEig ed =
                eig_bottom_k(symmetrized(reshape(grad, s.n, s.n)), k);
            return EigBasis{ed.vectors};
          },
          [&](const NuclearBall& s) -> KlooOutput {
            const Svd sv = svd_top_k(reshape(grad, s.n1, s.n2), k);
            return SingularBases{sv.u, sv.v};
          },
      },
      set);
}

std::vector<Vector> kloo_atoms(const FeasibleSet& set, const KlooOutput& out) {
  const std::size_t d = ambient_dim(set);
  std::vector<Vector> atoms;
  if (const auto* v = std::get_if<Vertices>(&out)) {
    atoms = v->atoms;
  } else if (const auto* sc = std::get_if<SignedCoords>(&out)) {
    if (const auto* l1 = std::get_if<L1Ball>(&set)) {
      for (const auto& [i, s] : sc->entries) {
        Vector a(d);
        a[i] = l1->radius * s;
        atoms.push_back(std::move(a));
      }
    } else if (const auto* ps = std::get_if<ProductSimplices>(&set)) {
      // entries are per-block selections (best first inside each block);
      // the r-th atom takes the r-th selection in every block, capping at
      // each block's count.
      const auto off = product_offsets(*ps);
      std::vector<std::vector<std::size_t>> per_block(ps->block_sizes.size());
      for (const auto& [i, s] : sc->entries) {
        (void)s;
        const std::size_t j =
            std::upper_bound(off.begin(), off.end(), i) - off.begin() - 1;
        per_block[j].push_back(i);
      }
      std::size_t kmax = 0;
      for (const auto& p : per_block) kmax = std::max(kmax, p.size());
      for (std::size_t r = 0; r < kmax; ++r) {
        Vector a(d);
        for (const auto& p : per_block)
          a[p[std::min(r, p.size() - 1)]] = 1.0;
        atoms.push_back(std::move(a));
      }
    } else {
      throw param_error("kloo_atoms: SignedCoords on unsupported set");
    }
  } else if (const auto* gr = std::get_if<Groups>(&out)) {
    const auto& gb = std::get<GroupNormBall>(set);
    // Group selections carry no direction; atoms are resolved against a
    // gradient elsewhere. Emit the canonical per-group atom for memory use.
    for (std::size_t j : gr->ids) {
      Vector a(d);
      a[gb.groups[j][0]] = gb.radius;
      atoms.push_back(std::move(a));
    }
  } else if (const auto* eb = std::get_if<EigBasis>(&out)) {
    const auto& sp = std::get<Spectrahedron>(set);
    for (std::size_t c = 0; c < eb->v.cols(); ++c) {
      Vector a(d);
      for (std::size_t r = 0; r < sp.n; ++r)
        for (std::size_t s = 0; s < sp.n; ++s)
          a[r * sp.n + s] = eb->v(r, c) * eb->v(s, c);
      atoms.push_back(std::move(a));
    }
  } else if (const auto* sb = std::get_if<SingularBases>(&out)) {
    const auto& nb = std::get<NuclearBall>(set);
    for (std::size_t c = 0; c < sb->u.cols(); ++c) {
      Vector a(d);
      for (std::size_t r = 0; r < nb.n1; ++r)
        for (std::size_t s = 0; s < nb.n2; ++s)
          a[r * nb.n2 + s] = -nb.radius * sb->u(r, c) * sb->v(s, c);
      atoms.push_back(std::move(a));
    }
  }
  return atoms;
}

DsParametrization build_ds(const FeasibleSet& set, const Vector& anchor,
                           const KlooOutput& out) {
  if (anchor.size() != ambient_dim(set))
    throw param_error("build_ds: anchor dimension mismatch");
  return std::visit(
      overloaded{
          [&](const Simplex&) -> DsParametrization {
            ConvexHullDs ds{anchor, {}};
            for (const auto& a : std::get<Vertices>(out).atoms)
              if (!(a == anchor)) ds.atoms.push_back(a);
            return ds;
          },
          [&](const L1Ball&) -> DsParametrization {
            ConvexHullDs ds{anchor, {}};
            for (auto& a : kloo_atoms(set, out))
              if (!(a == anchor)) ds.atoms.push_back(std::move(a));
            return ds;
          },
          [&](const Hypercube&) -> DsParametrization {
            ConvexHullDs ds{anchor, {}};
            for (const auto& a : std::get<Vertices>(out).atoms)
              if (!(a == anchor)) ds.atoms.push_back(a);
            return ds;
          },
          [&](const ProductSimplices& s) -> DsParametrization {
            const auto off = product_offsets(s);
            ScaledProductSimplicesDs ds;
            ds.anchor = anchor;
            ds.blocks.resize(s.block_sizes.size());
            ds.index_sets.resize(s.block_sizes.size());
            ds.off_mass.resize(s.block_sizes.size());
            for (std::size_t j = 0; j < s.block_sizes.size(); ++j) {
              ds.blocks[j].resize(s.block_sizes[j]);
              std::iota(ds.blocks[j].begin(), ds.blocks[j].end(), off[j]);
            }
            for (const auto& [i, sg] :
                 std::get<SignedCoords>(out).entries) {
              (void)sg;
              const std::size_t j =
                  std::upper_bound(off.begin(), off.end(), i) - off.begin() -
                  1;
              ds.index_sets[j].push_back(i);
            }
            for (std::size_t j = 0; j < s.block_sizes.size(); ++j) {
              double mass = 0.0;
              for (std::size_t i = off[j]; i < off[j + 1]; ++i)
                mass += anchor[i];
              for (std::size_t i : ds.index_sets[j]) mass -= anchor[i];
              ds.off_mass[j] = std::max(0.0, mass);
            }
            return ds;
          },
          [&](const GroupNormBall& s) -> DsParametrization {
            GroupSupportDs ds;
            ds.anchor = anchor;
            ds.radius = s.radius;
            for (std::size_t j : std::get<Groups>(out).ids)
              ds.support.push_back(s.groups[j]);
            return ds;
          },
          [&](const Spectrahedron& s) -> DsParametrization {
            return SpectralSimplexDs{anchor, std::get<EigBasis>(out).v, s.n};
          },
          [&](const NuclearBall& s) -> DsParametrization {
            const auto& sb = std::get<SingularBases>(out);
            return SpectralNuclearDs{anchor, sb.u,   sb.v,
                                     s.n1,   s.n2, s.radius};
          },
      },
      set);
}

Vector sample_feasible(const FeasibleSet& set, Rng& rng) {
  const std::size_t d = ambient_dim(set);
  auto dirichlet = [&rng](std::size_t m) {
    Vector w(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      w[i] = -std::log(1.0 - rng.uniform());
      sum += w[i];
    }
    scale(1.0 / sum, w);
    return w;
  };
  // Orthonormal basis from the eigenvectors of a seeded symmetric matrix.
  auto random_basis = [&rng](std::size_t m) {
    Matrix g(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) g(i, j) = g(j, i) = rng.normal();
    return sym_eig(g).vectors;
  };

  return std::visit(
      overloaded{
          [&](const Simplex&) { return dirichlet(d); },
          [&](const L1Ball& s) {
            Vector w = dirichlet(d);
            const double r = s.radius * rng.uniform();
            for (std::size_t i = 0; i < d; ++i)
              w[i] *= (rng.uniform() < 0.5 ? -r : r);
            return w;
          },
          [&](const Hypercube&) {
            Vector x(d);
            for (std::size_t i = 0; i < d; ++i) x[i] = rng.uniform();
            return x;
          },
          [&](const ProductSimplices& s) {
            Vector x(d);
            std::size_t off = 0;
            for (std::size_t b : s.block_sizes) {
              Vector w = dirichlet(b);
              for (std::size_t i = 0; i < b; ++i) x[off + i] = w[i];
              off += b;
            }
            return x;
          },
          [&](const GroupNormBall& s) {
            const Vector mass = dirichlet(s.groups.size());
            const double r = s.radius * rng.uniform();
            Vector x(d);
            for (std::size_t j = 0; j < s.groups.size(); ++j) {
              Vector dir(s.groups[j].size());
              for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = rng.normal();
              const double nd = norm2(dir);
              if (nd == 0.0) continue;
              const double c = r * mass[j] / nd;
              for (std::size_t i = 0; i < dir.size(); ++i)
                x[s.groups[j][i]] = c * dir[i];
            }
            return x;
          },
          [&](const Spectrahedron& s) {
            const Matrix q = random_basis(s.n);
            const Vector lam = dirichlet(s.n);
            Vector x(d);
            for (std::size_t i = 0; i < s.n; ++i)
              for (std::size_t r = 0; r < s.n; ++r)
                for (std::size_t c = 0; c < s.n; ++c)
                  x[r * s.n + c] += lam[i] * q(r, i) * q(c, i);
            return x;
          },
          [&](const NuclearBall& s) {
            const std::size_t m = std::min(s.n1, s.n2);
            const Matrix u = random_basis(s.n1);
            const Matrix v = random_basis(s.n2);
            Vector sig = dirichlet(m);
            const double r = s.radius * rng.uniform();
            Vector x(d);
            for (std::size_t i = 0; i < m; ++i)
              for (std::size_t a = 0; a < s.n1; ++a)
                for (std::size_t b = 0; b < s.n2; ++b)
                  x[a * s.n2 + b] += r * sig[i] * u(a, i) * v(b, i);
            return x;
          },
      },
      set);
}

}  // namespace kfw
