#include "kfw/linear_map.hpp"

#include <cmath>

namespace kfw {

double operator_norm(const LinearMap& map, double rel_tol, int max_iter,
                     std::uint64_t seed) {
  const std::size_t n = map.cols();
  Rng rng(seed);
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal();
  double nv = norm2(v);
  if (nv == 0.0) {
    v[0] = 1.0;
    nv = 1.0;
  }
  scale(1.0 / nv, v);

  double est = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = map.apply_adjoint(map.apply(v));
    const double lambda = norm2(w);  // estimate of sigma_max^2
    if (lambda == 0.0) return 0.0;
    scale(1.0 / lambda, w);
    v = w;
    const double next = std::sqrt(lambda);
    if (it > 0 && std::fabs(next - est) <= rel_tol * std::max(next, 1e-300)) {
      return next;
    }
    est = next;
  }
  return est;
}

}  // namespace kfw
