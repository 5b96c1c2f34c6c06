#pragma once

// Dense double-precision kernels used by every inner loop in the toolkit.
//
// Two implementations live behind the same interface: a portable scalar
// reference lane and an AVX2+FMA lane (x86-64 only). The active lane is
// picked once at startup from CPUID, and can be forced with the environment
// variable KFW_KERNELS=scalar|avx2 or programmatically via set_backend()
// (tests use this to cross-check the lanes against each other).
//
// All kernels are deterministic for a fixed lane. Results may differ between
// lanes by a few ulps because the AVX2 lane uses FMA and a different
// summation order.

#include <cstddef>
#include <string>

namespace kfw::kernels {

enum class Backend { scalar, avx2 };

// Lane currently in use.
Backend active_backend();

// Force a lane. Throws std::invalid_argument if the CPU lacks the ISA.
void set_backend(Backend b);

// True when the CPU (and build) can run the AVX2+FMA lane.
bool avx2_available();

std::string backend_name(Backend b);

// sum_i x[i]*y[i]
double dot(const double* x, const double* y, std::size_t n);

// sum_i x[i]*x[i]
double nrm2sq(const double* x, std::size_t n);

// y[i] += a*x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// x[i] *= a
void scal(double a, double* x, std::size_t n);

// Apply a plane rotation to two rows:
//   (x[i], y[i]) <- (c*x[i] - s*y[i], s*x[i] + c*y[i])
void rot(double* x, double* y, double c, double s, std::size_t n);

// y = A x for row-major A (m rows, n cols). y must not alias A or x.
void gemv(const double* a, std::size_t m, std::size_t n, const double* x,
          double* y);

// y = A^T x for row-major A (m rows, n cols); y has length n.
void gemv_t(const double* a, std::size_t m, std::size_t n, const double* x,
            double* y);

}  // namespace kfw::kernels
