#include "kfw/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#define KFW_X86 1
#include <immintrin.h>
#else
#define KFW_X86 0
#endif

namespace kfw::kernels {

// ---------------------------------------------------------------------------
// scalar reference lane
// ---------------------------------------------------------------------------

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2sq(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void rot(double* x, double* y, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void gemv(const double* a, std::size_t m, std::size_t n, const double* x,
          double* y) {
  for (std::size_t i = 0; i < m; ++i) y[i] = dot(a + i * n, x, n);
}

void gemv_t(const double* a, std::size_t m, std::size_t n, const double* x,
            double* y) {
  std::memset(y, 0, n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) axpy(x[i], a + i * n, y, n);
}

}  // namespace scalar

// ---------------------------------------------------------------------------
// AVX2 + FMA lane. Compiled with per-function target attributes so the rest
// of the translation unit stays baseline-ISA.
// ---------------------------------------------------------------------------

#if KFW_X86

namespace avx2 {

__attribute__((target("avx2,fma"))) double dot(const double* x,
                                               const double* y,
                                               std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  double lane[4];
  _mm256_storeu_pd(lane, acc0);
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

__attribute__((target("avx2,fma"))) double nrm2sq(const double* x,
                                                  std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double lane[4];
  _mm256_storeu_pd(lane, acc);
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

__attribute__((target("avx2,fma"))) void axpy(double a, const double* x,
                                              double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) void scal(double a, double* x,
                                              std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

__attribute__((target("avx2,fma"))) void rot(double* x, double* y, double c,
                                             double s, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i,
                     _mm256_fmsub_pd(cv, xv, _mm256_mul_pd(sv, yv)));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(sv, xv, _mm256_mul_pd(cv, yv)));
  }
  for (; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

__attribute__((target("avx2,fma"))) void gemv(const double* a, std::size_t m,
                                              std::size_t n, const double* x,
                                              double* y) {
  for (std::size_t i = 0; i < m; ++i) y[i] = dot(a + i * n, x, n);
}

__attribute__((target("avx2,fma"))) void gemv_t(const double* a, std::size_t m,
                                                std::size_t n, const double* x,
                                                double* y) {
  std::memset(y, 0, n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) axpy(x[i], a + i * n, y, n);
}

}  // namespace avx2

#endif  // KFW_X86

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

namespace {

struct Vtable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*nrm2sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*rot)(double*, double*, double, double, std::size_t);
  void (*gemv)(const double*, std::size_t, std::size_t, const double*,
               double*);
  void (*gemv_t)(const double*, std::size_t, std::size_t, const double*,
                 double*);
};

constexpr Vtable kScalar = {scalar::dot,  scalar::nrm2sq, scalar::axpy,
                            scalar::scal, scalar::rot,    scalar::gemv,
                            scalar::gemv_t};

#if KFW_X86
constexpr Vtable kAvx2 = {avx2::dot,  avx2::nrm2sq, avx2::axpy, avx2::scal,
                          avx2::rot,  avx2::gemv,   avx2::gemv_t};
#endif

bool detect_avx2() {
#if KFW_X86
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct State {
  Backend backend;
  const Vtable* vt;

  State() {
    backend = detect_avx2() ? Backend::avx2 : Backend::scalar;
    if (const char* env = std::getenv("KFW_KERNELS")) {
      if (std::strcmp(env, "scalar") == 0) backend = Backend::scalar;
      if (std::strcmp(env, "avx2") == 0 && detect_avx2())
        backend = Backend::avx2;
    }
    vt = pick(backend);
  }

  static const Vtable* pick(Backend b) {
#if KFW_X86
    if (b == Backend::avx2) return &kAvx2;
#endif
    (void)b;
    return &kScalar;
  }
};

State& state() {
  static State s;
  return s;
}

}  // namespace

Backend active_backend() { return state().backend; }

bool avx2_available() { return detect_avx2(); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !detect_avx2())
    throw std::invalid_argument("kernels: AVX2 lane not available on this CPU");
  state().backend = b;
  state().vt = State::pick(b);
}

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

double dot(const double* x, const double* y, std::size_t n) {
  return state().vt->dot(x, y, n);
}
double nrm2sq(const double* x, std::size_t n) {
  return state().vt->nrm2sq(x, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) {
  state().vt->axpy(a, x, y, n);
}
void scal(double a, double* x, std::size_t n) { state().vt->scal(a, x, n); }
void rot(double* x, double* y, double c, double s, std::size_t n) {
  state().vt->rot(x, y, c, s, n);
}
void gemv(const double* a, std::size_t m, std::size_t n, const double* x,
          double* y) {
  state().vt->gemv(a, m, n, x, y);
}
void gemv_t(const double* a, std::size_t m, std::size_t n, const double* x,
            double* y) {
  state().vt->gemv_t(a, m, n, x, y);
}

}  // namespace kfw::kernels
