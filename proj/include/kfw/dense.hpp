#pragma once

// Dense vector / row-major matrix types. Thin wrappers over contiguous
// storage; arithmetic goes through the dispatched kernels so every algorithm
// in the toolkit picks up the SIMD lane automatically.
//
// Points with matrix structure (spectrahedron / nuclear-ball variables) are
// stored flattened in row-major order; the trace inner product <A,B> then
// coincides with the flat dot product.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kfw/kernels.hpp"

namespace kfw {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : v_(n, fill) {}
  explicit Vector(std::vector<double> data) : v_(std::move(data)) {}

  static Vector checked(std::vector<double> data) {
    for (double x : data)
      if (!std::isfinite(x))
        throw std::invalid_argument("Vector: non-finite entry");
    return Vector(std::move(data));
  }

  std::size_t size() const { return v_.size(); }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  const std::vector<double>& raw() const { return v_; }

  bool operator==(const Vector& o) const { return v_ == o.v_; }

  bool all_finite() const {
    for (double x : v_)
      if (!std::isfinite(x)) return false;
    return true;
  }

 private:
  std::vector<double> v_;
};

// y += a x
inline void axpy(double a, const Vector& x, Vector& y) {
  kernels::axpy(a, x.data(), y.data(), x.size());
}

inline double dot(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
  return kernels::dot(x.data(), y.data(), x.size());
}

inline double norm2sq(const Vector& x) {
  return kernels::nrm2sq(x.data(), x.size());
}

inline double norm2(const Vector& x) { return std::sqrt(norm2sq(x)); }

inline void scale(double a, Vector& x) {
  kernels::scal(a, x.data(), x.size());
}

inline Vector operator-(const Vector& a, const Vector& b) {
  Vector r = a;
  kernels::axpy(-1.0, b.data(), r.data(), r.size());
  return r;
}

inline Vector operator+(const Vector& a, const Vector& b) {
  Vector r = a;
  kernels::axpy(1.0, b.data(), r.data(), r.size());
  return r;
}

inline Vector operator*(double a, const Vector& x) {
  Vector r = x;
  scale(a, r);
  return r;
}

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), v_(std::move(data)) {
    if (v_.size() != rows_ * cols_)
      throw std::invalid_argument("Matrix: data size mismatch");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double* row(std::size_t i) { return v_.data() + i * cols_; }
  const double* row(std::size_t i) const { return v_.data() + i * cols_; }
  double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return v_[i * cols_ + j];
  }

  const std::vector<double>& raw() const { return v_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs_asymmetry() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        m = std::max(m, std::fabs((*this)(i, j) - (*this)(j, i)));
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

// y = A x
inline Vector matvec(const Matrix& a, const Vector& x) {
  if (x.size() != a.cols()) throw std::invalid_argument("matvec: shape");
  Vector y(a.rows());
  kernels::gemv(a.data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

// y = A^T x
inline Vector matvec_t(const Matrix& a, const Vector& x) {
  if (x.size() != a.rows()) throw std::invalid_argument("matvec_t: shape");
  Vector y(a.cols());
  kernels::gemv_t(a.data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

// C = A B, accumulated row-wise so the inner loop is an axpy over rows of B.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) kernels::axpy(aik, b.row(k), ci, b.cols());
    }
  }
  return c;
}

inline double frob_norm(const Matrix& a) {
  return std::sqrt(kernels::nrm2sq(a.data(), a.rows() * a.cols()));
}

// Interpret a flat vector as a rows x cols matrix (copies).
inline Matrix reshape(const Vector& x, std::size_t rows, std::size_t cols) {
  if (x.size() != rows * cols) throw std::invalid_argument("reshape: size");
  return Matrix(rows, cols, x.raw());
}

inline Vector flatten(const Matrix& a) { return Vector(a.raw()); }

}  // namespace kfw
