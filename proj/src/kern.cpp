#include "abp/kern.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace abp::kern {

// Scalar reference path. The 4-lane accumulator layout mirrors the AVX2
// vertical accumulation exactly (lane j sees elements 4k+j), the tail is a
// separate in-order accumulator, and the final combine is ((l0+l1)+(l2+l3))+t.
// Any change here must be mirrored in kern_avx2.cpp to keep bit-equality.

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0, t = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    l0 += x[i] * y[i];
    l1 += x[i + 1] * y[i + 1];
    l2 += x[i + 2] * y[i + 2];
    l3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) t += x[i] * y[i];
  return ((l0 + l1) + (l2 + l3)) + t;
}

double sum_scalar(const double* x, std::size_t n) {
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0, t = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    l0 += x[i];
    l1 += x[i + 1];
    l2 += x[i + 2];
    l3 += x[i + 3];
  }
  for (; i < n; ++i) t += x[i];
  return ((l0 + l1) + (l2 + l3)) + t;
}

void mul_scalar(double* out, const double* x, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void mobility_scalar(double* out, const double* r, std::size_t n) {
  // (1-(r)+)+ == clamp(1-r, 0, 1); predicate order matches the AVX2 max/min
  for (std::size_t i = 0; i < n; ++i) {
    double v = 1.0 - r[i];
    v = (v > 0.0) ? v : 0.0;
    v = (v < 1.0) ? v : 1.0;
    out[i] = v;
  }
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void ew_axpby_scalar(double* out, const double* a, const double* x, const double* b,
                     const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] * x[i]) + (b[i] * y[i]);
}

void ew_acc_wdiff_scalar(double* u, const double* w, const double* p, const double* q,
                         std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) u[i] += w[i] * (p[i] - q[i]);
}

const Ops kScalar = {dot_scalar,  sum_scalar,      mul_scalar,         mobility_scalar,
                     axpy_scalar, ew_axpby_scalar, ew_acc_wdiff_scalar, "scalar"};

const Ops* select() {
  const char* env = std::getenv("ABP_SIMD");
  const char* mode = env ? env : "auto";
  if (std::strcmp(mode, "scalar") == 0) return &kScalar;
  const Ops* avx2 = avx2_ops();
  if (std::strcmp(mode, "avx2") == 0) {
    if (avx2) return avx2;
    std::fprintf(stderr, "abp: ABP_SIMD=avx2 requested but unavailable, using scalar kernels\n");
    return &kScalar;
  }
  return avx2 ? avx2 : &kScalar;
}

}  // namespace

const Ops& scalar_ops() { return kScalar; }

#ifndef ABP_WITH_AVX2
const Ops* avx2_ops() { return nullptr; }
#endif

const Ops& ops() {
  static const Ops* selected = select();
  return *selected;
}

}  // namespace abp::kern
