#pragma once

// A solvable instance: objective + feasible set + start point, with optional
// ground-truth metadata carried by the benchmark generators.

#include <cstdint>
#include <optional>
#include <string>

#include "kfw/feasible_set.hpp"
#include "kfw/objective.hpp"

namespace kfw {

struct Problem {
  std::string name;
  CompositeObjective objective;
  FeasibleSet set;
  Vector x0;  // empty = use the set's canonical vertex

  // Ground truth when the generator knows it.
  std::optional<double> f_star;
  std::optional<Vector> x_star;              // a known minimizer
  std::optional<std::size_t> planted_r;      // sparsity of the solution face
  std::optional<double> planted_delta;       // strict-complementarity gap
  std::size_t suggested_k = 1;               // a sensible k for this instance
  std::uint64_t content_hash = 0;            // fingerprint of the instance

  Vector start() const {
    return x0.size() ? x0 : canonical_vertex(set);
  }
};

// FNV-1a over the bit patterns of a stream of doubles / integers; used to
// fingerprint generated instances so result files can be cross-checked.
class ContentHasher {
 public:
  void add(double x) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(x));
    __builtin_memcpy(&bits, &x, sizeof(bits));
    add_u64(bits);
  }
  void add_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xff;
      h_ *= 0x100000001b3ull;
    }
  }
  void add(const Vector& v) {
    add_u64(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) add(v[i]);
  }
  void add(const Matrix& m) {
    add_u64(m.rows());
    add_u64(m.cols());
    for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) add(m.data()[i]);
  }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

}  // namespace kfw
