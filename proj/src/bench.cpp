#include "kfw/bench.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <utility>

#include "kfw/eig.hpp"
#include "kfw/errors.hpp"
#include "kfw/rng.hpp"

namespace kfw {

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix gaussian_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r * c; ++i) m.data()[i] = rng.normal();
  return m;
}

double entry_stddev(const double* x, std::size_t n) {
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += (x[i] - mean) * (x[i] - mean);
  return std::sqrt(var / static_cast<double>(n));
}

// add iid normal noise with std = level * stddev(signal entries)
void add_noise(Vector& signal, double level, Rng& rng) {
  if (level <= 0.0) return;
  const double s = entry_stddev(signal.data(), signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i)
    signal[i] += level * s * rng.normal();
}

// first `k` entries of a seeded uniform permutation of {0..n-1}
std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_int(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

// positive weights summing to `total`, each at least 5% of an equal share
Vector positive_split(std::size_t k, double total, Rng& rng) {
  Vector w(k);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    w[i] = 0.05 + rng.uniform();
    sum += w[i];
  }
  for (std::size_t i = 0; i < k; ++i) w[i] *= total / sum;
  return w;
}

std::shared_ptr<const QuadraticOuter> sq_dist(Vector b, double scale = 1.0) {
  return std::make_shared<QuadraticOuter>(std::move(b), scale);
}

}  // namespace

Problem gen_lasso(std::size_t m, std::size_t n, std::size_t s, double noise,
                  std::uint64_t seed) {
  if (s == 0 || s > n) throw param_error("gen_lasso: need 1 <= s <= n");
  Rng rng(seed);
  Matrix a = gaussian_matrix(m, n, rng);
  Vector x_true(n);
  const auto support = sample_without_replacement(n, s, rng);
  for (std::size_t i : support) {
    const double mag = 0.5 + rng.uniform();
    x_true[i] = rng.uniform() < 0.5 ? -mag : mag;
  }
  Vector b = matvec(a, x_true);
  add_noise(b, noise, rng);

  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) radius += std::fabs(x_true[i]);

  ContentHasher h;
  h.add_u64(seed);
  h.add(a);
  h.add(b);
  h.add(radius);

  Problem prob;
  prob.name = "lasso";
  prob.objective = CompositeObjective(std::make_shared<DenseMap>(std::move(a)),
                                      sq_dist(std::move(b)), Vector(), n);
  prob.set = L1Ball{n, radius};
  if (noise == 0.0) {
    prob.f_star = 0.0;
    prob.x_star = x_true;
  }
  prob.planted_r = s;
  prob.suggested_k = s;
  prob.content_hash = h.digest();
  return prob;
}

SvmInstance gen_svm_instance(std::size_t n_samples, std::size_t n_features,
                             std::uint64_t seed, double c_param) {
  if (n_samples < 2 || n_samples % 2 != 0)
    throw param_error("gen_svm: n_samples must be even and >= 2");
  if (!(c_param > 0.0)) throw param_error("gen_svm: C must be > 0");
  Rng rng(seed);
  const std::size_t half = n_samples / 2;
  const std::size_t rank = std::min<std::size_t>(5, n_features);

  // two low-rank clusters shifted to +1 / -1, plus 10% relative noise
  Matrix x(n_features, n_samples);
  for (int cls = 0; cls < 2; ++cls) {
    const Matrix u = gaussian_matrix(n_features, rank, rng);
    const Matrix v = gaussian_matrix(rank, half, rng);
    const Matrix uv = matmul(u, v);
    const double shift = cls == 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n_features; ++i)
      for (std::size_t j = 0; j < half; ++j)
        x(i, cls * half + j) = uv(i, j) + shift;
  }
  const double sx = entry_stddev(x.data(), n_features * n_samples);
  for (std::size_t i = 0; i < n_features * n_samples; ++i)
    x.data()[i] += 0.1 * sx * rng.normal();

  std::vector<int> y(n_samples);
  for (std::size_t j = 0; j < n_samples; ++j) y[j] = j < half ? 1 : -1;

  Matrix q(n_samples, n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (std::size_t j = i; j < n_samples; ++j) {
      double ip = 0.0;
      for (std::size_t f = 0; f < n_features; ++f) ip += x(f, i) * x(f, j);
      double val = y[i] * y[j] * (ip + 1.0) * (ip + 1.0);
      if (i == j) val += 1.0 / c_param;
      q(i, j) = val;
      q(j, i) = val;
    }
  }

  // realize f = lambda' Q lambda as ||A lambda||^2 with A = Q^{1/2}
  const SymEig eig = sym_eig(q);
  Matrix a(n_samples, n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double root = std::sqrt(std::max(0.0, eig.values[i]));
    for (std::size_t j = 0; j < n_samples; ++j)
      a(i, j) = root * eig.vectors(j, i);
  }

  ContentHasher h;
  h.add_u64(seed);
  h.add(q);
  h.add(c_param);

  SvmInstance inst;
  inst.problem.name = "svm";
  inst.problem.objective =
      CompositeObjective(std::make_shared<DenseMap>(std::move(a)),
                         sq_dist(Vector(n_samples)), Vector(), n_samples);
  inst.problem.set = Simplex{n_samples};
  // expected support-vector count for this data model (~1/5 of the samples)
  inst.problem.suggested_k = std::max<std::size_t>(1, n_samples / 5);
  inst.problem.content_hash = h.digest();
  inst.features = std::move(x);
  inst.labels = std::move(y);
  inst.c_param = c_param;
  return inst;
}

Problem gen_svm(std::size_t n_samples, std::size_t n_features,
                std::uint64_t seed, double c_param) {
  return gen_svm_instance(n_samples, n_features, seed, c_param).problem;
}

Problem gen_group_lasso(std::size_t p, std::size_t n, std::size_t groups,
                        std::size_t live, double noise, std::uint64_t seed) {
  if (live == 0 || live > groups)
    throw param_error("gen_group_lasso: need 1 <= live <= groups");
  Rng rng(seed);
  Matrix w_true(p, groups);
  const auto live_cols = sample_without_replacement(groups, live, rng);
  for (std::size_t c : live_cols)
    for (std::size_t r = 0; r < p; ++r) w_true(r, c) = rng.normal();
  Matrix x = gaussian_matrix(groups, n, rng);
  Vector y = flatten(matmul(w_true, x));
  add_noise(y, noise, rng);

  // one group per column of W, in the row-major flattening of vec(W)
  std::vector<std::vector<std::size_t>> parts(groups);
  for (std::size_t c = 0; c < groups; ++c) {
    parts[c].resize(p);
    for (std::size_t r = 0; r < p; ++r) parts[c][r] = r * groups + c;
  }
  double radius = 0.0;
  for (std::size_t c = 0; c < groups; ++c) {
    double nc = 0.0;
    for (std::size_t r = 0; r < p; ++r) nc += w_true(r, c) * w_true(r, c);
    radius += std::sqrt(nc);
  }

  ContentHasher h;
  h.add_u64(seed);
  h.add(w_true);
  h.add(x);
  h.add(y);
  h.add(radius);

  const std::size_t dim = p * groups;
  Problem prob;
  prob.name = "group_lasso";
  prob.objective =
      CompositeObjective(std::make_shared<RightMultiplyMap>(p, std::move(x)),
                         sq_dist(std::move(y)), Vector(), dim);
  prob.set = GroupNormBall{std::move(parts), radius};
  if (noise == 0.0) {
    prob.f_star = 0.0;
    prob.x_star = flatten(w_true);
  }
  prob.planted_r = live;
  prob.suggested_k = live;
  prob.content_hash = h.digest();
  return prob;
}

Problem gen_matrix_completion(std::size_t n1, std::size_t n2, std::size_t rank,
                              double obs_frac, std::uint64_t seed) {
  if (!(obs_frac > 0.0 && obs_frac <= 1.0))
    throw param_error("gen_matrix_completion: obs_frac must be in (0, 1]");
  if (rank == 0 || rank > std::min(n1, n2))
    throw param_error("gen_matrix_completion: rank out of range");
  Rng rng(seed);
  const Matrix u = gaussian_matrix(n1, rank, rng);
  const Matrix v = gaussian_matrix(n2, rank, rng);
  const Matrix m = matmul(u, v.transposed());

  const std::size_t total = n1 * n2;
  const auto count = static_cast<std::size_t>(
      std::llround(obs_frac * static_cast<double>(total)));
  auto mask = sample_without_replacement(total, std::max<std::size_t>(1, count),
                                         rng);
  std::sort(mask.begin(), mask.end());
  Vector b(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) b[i] = m.data()[mask[i]];

  const Svd sv = svd(m);
  double radius = 0.0;
  for (std::size_t i = 0; i < sv.sigma.size(); ++i) radius += sv.sigma[i];

  ContentHasher h;
  h.add_u64(seed);
  h.add(m);
  h.add_u64(mask.size());
  for (std::size_t i : mask) h.add_u64(i);
  h.add(radius);

  Problem prob;
  prob.name = "matrix_completion";
  prob.objective = CompositeObjective(
      std::make_shared<EntryMaskMap>(total, std::move(mask)),
      sq_dist(std::move(b)), Vector(), total);
  prob.set = NuclearBall{n1, n2, radius};
  prob.f_star = 0.0;
  prob.x_star = flatten(m);
  prob.planted_r = rank;
  prob.suggested_k = rank;
  prob.content_hash = h.digest();
  return prob;
}

Problem gen_cone_polygon(std::size_t n_vertices) {
  if (n_vertices < 3) throw param_error("gen_cone_polygon: need >= 3 vertices");
  const std::size_t n = n_vertices;
  const std::size_t dim = n + 1;  // apex + polygon, barycentric coordinates

  // columns: xy-coordinates of the polytope vertices (apex at the origin)
  Matrix a(2, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    a(0, i + 1) = std::cos(th);
    a(1, i + 1) = std::sin(th);
  }
  Vector c(dim);
  c[0] = 1.0;  // apex height; polygon sits at height 0

  Vector x0(dim);
  x0[0] = 0.1;
  for (std::size_t i = 1; i < dim; ++i) x0[i] = 0.9 / static_cast<double>(n);
  Vector x_star(dim);
  for (std::size_t i = 1; i < dim; ++i) x_star[i] = 1.0 / static_cast<double>(n);

  ContentHasher h;
  h.add_u64(n);
  h.add(a);

  Problem prob;
  prob.name = "cone_polygon";
  prob.objective = CompositeObjective(std::make_shared<DenseMap>(std::move(a)),
                                      sq_dist(Vector(2)), std::move(c), dim);
  prob.set = Simplex{dim};
  prob.x0 = std::move(x0);
  prob.f_star = 0.0;
  prob.x_star = std::move(x_star);
  prob.planted_r = n;
  prob.planted_delta = 1.0;
  prob.suggested_k = n;
  prob.content_hash = h.digest();
  return prob;
}

Problem gen_hypercube_projection(std::size_t n, std::size_t n_fractional,
                                 std::uint64_t seed) {
  if (n_fractional > n)
    throw param_error("gen_hypercube_projection: n_fractional > n");
  Rng rng(seed);
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = i < n_fractional ? rng.uniform() : 2.0;
  Vector x_star(n);
  for (std::size_t i = 0; i < n; ++i) x_star[i] = std::min(1.0, z[i]);

  ContentHasher h;
  h.add_u64(seed);
  h.add(z);

  Problem prob;
  prob.name = "hypercube";
  prob.objective =
      CompositeObjective(nullptr, sq_dist(std::move(z)), Vector(), n);
  prob.set = Hypercube{n};
  prob.f_star = static_cast<double>(n - n_fractional);
  prob.x_star = std::move(x_star);
  prob.planted_r = n_fractional < 62 ? (std::size_t{1} << n_fractional)
                                     : (std::size_t{1} << 62);
  prob.suggested_k = n_fractional + 1;
  prob.content_hash = h.digest();
  return prob;
}

Problem gen_spectrahedron_planted(std::size_t n, std::size_t rank, double gap,
                                  std::uint64_t seed) {
  if (rank == 0 || rank >= n)
    throw param_error("gen_spectrahedron_planted: need 1 <= rank < n");
  if (!(gap > 0.0 && gap < 2.0))
    throw param_error("gen_spectrahedron_planted: gap must be in (0, 2)");
  Rng rng(seed);
  const double tau = 2.0;

  // eigenbasis from a seeded random symmetric matrix
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double g = rng.normal();
      s(i, j) = g;
      s(j, i) = g;
    }
  const Matrix q = sym_eig(s).vectors;

  // spectrum of B: `rank` live values tau + a_i (sum a_i = 1, the trace
  // budget), then a leader at tau - gap/2 and a decaying tail; the projection
  // onto the spectrahedron keeps exactly the live block
  Vector beta(n);
  const Vector live = positive_split(rank, 1.0, rng);
  for (std::size_t i = 0; i < rank; ++i) beta[i] = tau + live[i];
  const double head = tau - 0.5 * gap;
  const std::size_t dead = n - rank;
  for (std::size_t j = 0; j < dead; ++j)
    beta[rank + j] =
        head * (1.0 - static_cast<double>(j) / static_cast<double>(dead));

  Matrix b(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t cidx = 0; cidx < n; ++cidx) {
      double acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) acc += q(r, t) * beta[t] * q(cidx, t);
      b(r, cidx) = acc;
    }
  // exact symmetry, so downstream eigensolvers see a clean input
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t cidx = r + 1; cidx < n; ++cidx) {
      const double m = 0.5 * (b(r, cidx) + b(cidx, r));
      b(r, cidx) = m;
      b(cidx, r) = m;
    }

  Matrix xs(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t cidx = 0; cidx < n; ++cidx) {
      double acc = 0.0;
      for (std::size_t t = 0; t < rank; ++t)
        acc += q(r, t) * (beta[t] - tau) * q(cidx, t);
      xs(r, cidx) = acc;
    }

  double f_star = static_cast<double>(rank) * tau * tau;
  for (std::size_t j = 0; j < dead; ++j) f_star += beta[rank + j] * beta[rank + j];

  ContentHasher h;
  h.add_u64(seed);
  h.add(b);

  Problem prob;
  prob.name = "spectrahedron";
  prob.objective =
      CompositeObjective(nullptr, sq_dist(flatten(b)), Vector(), n * n);
  prob.set = Spectrahedron{n};
  prob.f_star = f_star;
  prob.x_star = flatten(xs);
  prob.planted_r = rank;
  prob.planted_delta = gap;
  prob.suggested_k = rank;
  prob.content_hash = h.digest();
  return prob;
}

Problem gen_nuclear_planted(std::size_t n1, std::size_t n2, std::size_t rank,
                            double gap, double radius, std::uint64_t seed) {
  const std::size_t p = std::min(n1, n2);
  if (rank == 0 || rank >= p)
    throw param_error("gen_nuclear_planted: need 1 <= rank < min(n1,n2)");
  if (!(gap > 0.0 && gap < 4.0) || !(radius > 0.0))
    throw param_error("gen_nuclear_planted: bad gap/radius");
  Rng rng(seed);
  const double tau = 2.0;

  // orthonormal singular bases from a seeded Gaussian matrix
  const Svd bases = svd(gaussian_matrix(n1, n2, rng));

  Vector beta(p);
  const Vector live = positive_split(rank, radius, rng);
  for (std::size_t i = 0; i < rank; ++i) beta[i] = tau + live[i];
  const double head = tau - 0.5 * gap;
  const std::size_t dead = p - rank;
  for (std::size_t j = 0; j < dead; ++j)
    beta[rank + j] =
        head * (1.0 - static_cast<double>(j) / static_cast<double>(dead));

  Matrix b(n1, n2), xs(n1, n2);
  for (std::size_t r = 0; r < n1; ++r)
    for (std::size_t cidx = 0; cidx < n2; ++cidx) {
      double accb = 0.0, accx = 0.0;
      for (std::size_t t = 0; t < p; ++t) {
        const double uv = bases.u(r, t) * bases.v(cidx, t);
        accb += beta[t] * uv;
        if (t < rank) accx += (beta[t] - tau) * uv;
      }
      b(r, cidx) = accb;
      xs(r, cidx) = accx;
    }

  double f_star = static_cast<double>(rank) * tau * tau;
  for (std::size_t j = 0; j < dead; ++j) f_star += beta[rank + j] * beta[rank + j];

  ContentHasher h;
  h.add_u64(seed);
  h.add(b);
  h.add(radius);

  Problem prob;
  prob.name = "nuclear";
  prob.objective =
      CompositeObjective(nullptr, sq_dist(flatten(b)), Vector(), n1 * n2);
  prob.set = NuclearBall{n1, n2, radius};
  prob.f_star = f_star;
  prob.x_star = flatten(xs);
  prob.planted_r = rank;
  prob.planted_delta = gap;
  prob.suggested_k = rank;
  prob.content_hash = h.digest();
  return prob;
}

namespace {

std::map<std::string, double> desk_defaults(const std::string& name) {
  if (name == "lasso")
    return {{"m", 200}, {"n", 500}, {"s", 20}, {"noise", 0.0}};
  if (name == "svm")
    return {{"n_samples", 200}, {"n_features", 20}, {"c", 10.0}};
  if (name == "group_lasso")
    return {{"p", 5}, {"n", 200}, {"groups", 40}, {"live", 4}, {"noise", 0.0}};
  if (name == "matrix_completion")
    return {{"n1", 100}, {"n2", 100}, {"rank", 3}, {"obs_frac", 0.5}};
  if (name == "cone_polygon") return {{"n_vertices", 200}};
  if (name == "hypercube") return {{"n", 50}, {"n_fractional", 10}};
  if (name == "spectrahedron")
    return {{"n", 60}, {"rank", 2}, {"gap", 0.5}};
  if (name == "nuclear")
    return {{"n1", 40}, {"n2", 50}, {"rank", 3}, {"gap", 0.5}, {"radius", 1.0}};
  throw param_error("unknown benchmark problem: " + name);
}

void scale_up(std::map<std::string, double>& d, const std::string& name) {
  // full-size configurations (the desk defaults are one tenth of these)
  if (name == "lasso") {
    d["m"] = 2000;
    d["n"] = 5000;
    d["s"] = 200;
  } else if (name == "svm") {
    d["n_samples"] = 1000;
  } else if (name == "group_lasso") {
    d["p"] = 10;
    d["n"] = 1000;
    d["groups"] = 100;
    d["live"] = 10;
  } else if (name == "matrix_completion") {
    d["n1"] = 500;
    d["n2"] = 500;
    d["rank"] = 5;
  } else if (name == "cone_polygon") {
    d["n_vertices"] = 2000;
  } else if (name == "hypercube") {
    d["n"] = 500;
    d["n_fractional"] = 20;
  } else if (name == "spectrahedron") {
    d["n"] = 200;
  } else if (name == "nuclear") {
    d["n1"] = 400;
    d["n2"] = 500;
  }
}

std::size_t as_index(double v, const std::string& key) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 9e15)
    throw param_error("benchmark parameter must be a nonnegative integer: " +
                      key);
  return static_cast<std::size_t>(v);
}

}  // namespace

std::map<std::string, double> bench_defaults(const std::string& name,
                                             bool paper_scale) {
  auto d = desk_defaults(name);
  if (paper_scale) scale_up(d, name);
  return d;
}

Problem make_bench_problem(const std::string& name, std::uint64_t seed,
                           bool paper_scale,
                           const std::map<std::string, double>& overrides) {
  auto params = bench_defaults(name, paper_scale);
  for (const auto& [key, value] : overrides) {
    auto it = params.find(key);
    if (it == params.end())
      throw param_error("unknown parameter '" + key + "' for problem " + name);
    it->second = value;
  }
  auto idx = [&](const char* key) { return as_index(params.at(key), key); };

  if (name == "lasso")
    return gen_lasso(idx("m"), idx("n"), idx("s"), params.at("noise"), seed);
  if (name == "svm")
    return gen_svm(idx("n_samples"), idx("n_features"), seed, params.at("c"));
  if (name == "group_lasso")
    return gen_group_lasso(idx("p"), idx("n"), idx("groups"), idx("live"),
                           params.at("noise"), seed);
  if (name == "matrix_completion")
    return gen_matrix_completion(idx("n1"), idx("n2"), idx("rank"),
                                 params.at("obs_frac"), seed);
  if (name == "cone_polygon") return gen_cone_polygon(idx("n_vertices"));
  if (name == "hypercube")
    return gen_hypercube_projection(idx("n"), idx("n_fractional"), seed);
  if (name == "spectrahedron")
    return gen_spectrahedron_planted(idx("n"), idx("rank"), params.at("gap"),
                                     seed);
  if (name == "nuclear")
    return gen_nuclear_planted(idx("n1"), idx("n2"), idx("rank"),
                               params.at("gap"), params.at("radius"), seed);
  throw param_error("unknown benchmark problem: " + name);
}

}  // namespace kfw
