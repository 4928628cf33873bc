// AVX2 variants of the array kernels. Compiled with -mavx2 in its own TU;
// only reachable through the runtime CPU probe below. Deliberately no FMA:
// mul+add keeps results bit-identical with the scalar reference path.

#include "abp/kern.hpp"

#if defined(ABP_WITH_AVX2) && defined(__AVX2__)

#include <immintrin.h>

namespace abp::kern {
namespace {

// horizontal combine matching the scalar ((l0+l1)+(l2+l3)) tree
inline double hsum(__m256d v) {
  alignas(32) double l[4];
  _mm256_store_pd(l, v);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  double t = 0;
  for (; i < n; ++i) t += x[i] * y[i];
  return hsum(acc) + t;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double t = 0;
  for (; i < n; ++i) t += x[i];
  return hsum(acc) + t;
}

void mul_avx2(double* out, const double* x, const double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void mobility_avx2(double* out, const double* r, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_sub_pd(one, _mm256_loadu_pd(r + i));
    v = _mm256_max_pd(v, zero);  // NaN -> 0, same as the scalar predicates
    v = _mm256_min_pd(v, one);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) {
    double v = 1.0 - r[i];
    v = (v > 0.0) ? v : 0.0;
    v = (v < 1.0) ? v : 1.0;
    out[i] = v;
  }
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, t);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void ew_axpby_avx2(double* out, const double* a, const double* x, const double* b, const double* y,
                   std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ax = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i));
    __m256d by = _mm256_mul_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(ax, by));
  }
  for (; i < n; ++i) out[i] = (a[i] * x[i]) + (b[i] * y[i]);
}

void ew_acc_wdiff_avx2(double* u, const double* w, const double* p, const double* q,
                       std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), _mm256_loadu_pd(q + i));
    __m256d t = _mm256_add_pd(_mm256_loadu_pd(u + i), _mm256_mul_pd(_mm256_loadu_pd(w + i), d));
    _mm256_storeu_pd(u + i, t);
  }
  for (; i < n; ++i) u[i] += w[i] * (p[i] - q[i]);
}

const Ops kAvx2 = {dot_avx2,  sum_avx2,      mul_avx2,          mobility_avx2,
                   axpy_avx2, ew_axpby_avx2, ew_acc_wdiff_avx2, "avx2"};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

const Ops* avx2_ops() {
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
}

}  // namespace abp::kern

#endif  // ABP_WITH_AVX2 && __AVX2__
