#pragma once

// Linear operators A used inside composite objectives f(x) = g(Ax) + <c,x>.
//
// Benchmarks need three shapes: an explicit dense matrix, an entry mask
// (matrix completion observes a subset of entries), and "multiply a flattened
// matrix variable on the right by a fixed matrix" (multi-response regression).
// Operator norms come from power iteration, which only needs apply/adjoint.

#include <cstddef>
#include <memory>

#include "kfw/dense.hpp"
#include "kfw/errors.hpp"
#include "kfw/rng.hpp"

namespace kfw {

class LinearMap {
 public:
  virtual ~LinearMap() = default;
  virtual std::size_t rows() const = 0;  // output dimension
  virtual std::size_t cols() const = 0;  // input dimension
  virtual Vector apply(const Vector& x) const = 0;
  virtual Vector apply_adjoint(const Vector& y) const = 0;
};

class IdentityMap final : public LinearMap {
 public:
  explicit IdentityMap(std::size_t n) : n_(n) {}
  std::size_t rows() const override { return n_; }
  std::size_t cols() const override { return n_; }
  Vector apply(const Vector& x) const override { return x; }
  Vector apply_adjoint(const Vector& y) const override { return y; }

 private:
  std::size_t n_;
};

class DenseMap final : public LinearMap {
 public:
  explicit DenseMap(Matrix a) : a_(std::move(a)) {}
  std::size_t rows() const override { return a_.rows(); }
  std::size_t cols() const override { return a_.cols(); }
  Vector apply(const Vector& x) const override { return matvec(a_, x); }
  Vector apply_adjoint(const Vector& y) const override {
    return matvec_t(a_, y);
  }
  const Matrix& matrix() const { return a_; }

 private:
  Matrix a_;
};

// Selects a fixed list of entries from a flattened n1 x n2 matrix variable.
// Used by matrix completion: (Ax)_t = x[mask[t]].
class EntryMaskMap final : public LinearMap {
 public:
  EntryMaskMap(std::size_t ambient_dim, std::vector<std::size_t> mask)
      : n_(ambient_dim), mask_(std::move(mask)) {
    for (std::size_t m : mask_)
      if (m >= n_) throw param_error("EntryMaskMap: index out of range");
  }
  std::size_t rows() const override { return mask_.size(); }
  std::size_t cols() const override { return n_; }
  Vector apply(const Vector& x) const override {
    Vector y(mask_.size());
    for (std::size_t t = 0; t < mask_.size(); ++t) y[t] = x[mask_[t]];
    return y;
  }
  Vector apply_adjoint(const Vector& y) const override {
    Vector x(n_);
    for (std::size_t t = 0; t < mask_.size(); ++t) x[mask_[t]] += y[t];
    return x;
  }
  const std::vector<std::size_t>& mask() const { return mask_; }

 private:
  std::size_t n_;
  std::vector<std::size_t> mask_;
};

// vec(W) -> vec(W * X) for W of shape (rows_w x cols_w), X fixed.
class RightMultiplyMap final : public LinearMap {
 public:
  RightMultiplyMap(std::size_t rows_w, Matrix x)
      : rows_w_(rows_w), x_(std::move(x)) {}
  std::size_t rows() const override { return rows_w_ * x_.cols(); }
  std::size_t cols() const override { return rows_w_ * x_.rows(); }
  Vector apply(const Vector& w) const override {
    return flatten(matmul(reshape(w, rows_w_, x_.rows()), x_));
  }
  Vector apply_adjoint(const Vector& y) const override {
    // adjoint of W -> WX is R -> R X^T
    return flatten(matmul(reshape(y, rows_w_, x_.cols()), x_.transposed()));
  }
  std::size_t rows_w() const { return rows_w_; }
  const Matrix& factor() const { return x_; }

 private:
  std::size_t rows_w_;
  Matrix x_;
};

// Largest singular value of the map, by power iteration on A^T A with a
// seeded start vector. rel_tol on successive estimates.
double operator_norm(const LinearMap& map, double rel_tol = 1e-6,
                     int max_iter = 500, std::uint64_t seed = 20240501);

}  // namespace kfw
