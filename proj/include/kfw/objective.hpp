#pragma once

// Composite smooth objectives f(x) = g(A x) + <c, x>.
//
// g is a smooth convex outer function supplied through a small interface;
// the shipped outer is the (scaled) squared distance g(z) = scale*||z - b||^2,
// which covers every benchmark in the suite. The smoothness constant of f is
// L_g * ||A||_op^2, with the operator norm obtained by power iteration and
// cached after the first request.

#include <memory>
#include <optional>

#include "kfw/dense.hpp"
#include "kfw/errors.hpp"
#include "kfw/linear_map.hpp"

namespace kfw {

class Outer {
 public:
  virtual ~Outer() = default;
  virtual double value(const Vector& z) const = 0;
  virtual Vector gradient(const Vector& z) const = 0;
  // Smoothness constant of the outer function (gradient Lipschitz bound).
  virtual double smoothness() const = 0;
  // True when g is a quadratic with constant Hessian; subproblem solvers use
  // this to precompute exact reduced models.
  virtual bool is_quadratic() const = 0;
};

// g(z) = scale * ||z - b||^2
class QuadraticOuter final : public Outer {
 public:
  explicit QuadraticOuter(Vector b, double scale = 1.0)
      : b_(std::move(b)), scale_(scale) {
    if (!(scale > 0.0)) throw param_error("QuadraticOuter: scale must be > 0");
  }
  double value(const Vector& z) const override {
    return scale_ * norm2sq(z - b_);
  }
  Vector gradient(const Vector& z) const override {
    Vector g = z - b_;
    scale(2.0 * scale_, g);
    return g;
  }
  double smoothness() const override { return 2.0 * scale_; }
  bool is_quadratic() const override { return true; }
  const Vector& b() const { return b_; }
  double quad_scale() const { return scale_; }

 private:
  Vector b_;
  double scale_;
};

class CompositeObjective {
 public:
  // Zero-dimensional placeholder so containers of objectives stay regular.
  CompositeObjective()
      : CompositeObjective(nullptr, std::make_shared<QuadraticOuter>(Vector()),
                           Vector(), 0) {}

  // map may be null = identity on dim; c may be empty = zero.
  CompositeObjective(std::shared_ptr<const LinearMap> map,
                     std::shared_ptr<const Outer> outer, Vector c,
                     std::size_t dim)
      : map_(std::move(map)), outer_(std::move(outer)), c_(std::move(c)),
        dim_(dim) {
    if (!outer_) throw param_error("CompositeObjective: outer required");
    if (!map_) map_ = std::make_shared<IdentityMap>(dim_);
    if (map_->cols() != dim_)
      throw param_error("CompositeObjective: map input dim mismatch");
    if (c_.size() != 0 && c_.size() != dim_)
      throw param_error("CompositeObjective: linear term dim mismatch");
  }

  std::size_t dim() const { return dim_; }
  const LinearMap& map() const { return *map_; }
  std::shared_ptr<const LinearMap> map_ptr() const { return map_; }
  const Outer& outer() const { return *outer_; }
  std::shared_ptr<const Outer> outer_ptr() const { return outer_; }
  const Vector& linear_term() const { return c_; }
  bool has_linear_term() const { return c_.size() != 0; }

  double value(const Vector& x) const {
    double f = outer_->value(map_->apply(x));
    if (has_linear_term()) f += dot(c_, x);
    if (!std::isfinite(f))
      throw numeric_error("objective: non-finite value encountered");
    return f;
  }

  Vector gradient(const Vector& x) const {
    Vector g = map_->apply_adjoint(outer_->gradient(map_->apply(x)));
    if (has_linear_term()) axpy(1.0, c_, g);
    if (!g.all_finite())
      throw numeric_error("objective: non-finite gradient encountered");
    return g;
  }

  // Value and gradient sharing one forward pass through A.
  double value_gradient(const Vector& x, Vector& grad_out) const {
    const Vector z = map_->apply(x);
    double f = outer_->value(z);
    grad_out = map_->apply_adjoint(outer_->gradient(z));
    if (has_linear_term()) {
      f += dot(c_, x);
      axpy(1.0, c_, grad_out);
    }
    if (!std::isfinite(f) || !grad_out.all_finite())
      throw numeric_error("objective: non-finite value/gradient");
    return f;
  }

  // L_f = L_g * ||A||_op^2, cached.
  double smoothness() const {
    if (!lf_) {
      const double a = operator_norm(*map_);
      lf_ = outer_->smoothness() * a * a;
    }
    return *lf_;
  }

 private:
  std::shared_ptr<const LinearMap> map_;
  std::shared_ptr<const Outer> outer_;
  Vector c_;
  std::size_t dim_;
  mutable std::optional<double> lf_;
};

}  // namespace kfw
