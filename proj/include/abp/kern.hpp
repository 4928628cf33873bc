#pragma once

#include <cstddef>

// Low-level array kernels behind a runtime-dispatched function table.
//
// Two implementations exist: a scalar reference and an AVX2 variant picked at
// startup when the CPU supports it (override with ABP_SIMD=scalar|avx2|auto).
// Both use the same 4-lane blocked accumulation, the same combine tree and no
// FMA contraction, so their results are bit-identical; the unit tests assert
// exact equality. Reductions therefore do not depend on the dispatch decision.
namespace abp::kern {

struct Ops {
  // sum_i x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // out[i] = x[i]*y[i]
  void (*mul)(double* out, const double* x, const double* y, std::size_t n);
  // out[i] = (1 - (r[i])+)+   (NaN maps to 0; callers NaN-check separately)
  void (*mobility)(double* out, const double* r, std::size_t n);
  // y[i] += a*x[i]
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // out[i] = a[i]*x[i] + b[i]*y[i]      (ETD decay + phi1 update)
  void (*ew_axpby)(double* out, const double* a, const double* x, const double* b,
                   const double* y, std::size_t n);
  // u[i] += w[i]*(p[i] - q[i])          (ETD-RK2 correction)
  void (*ew_acc_wdiff)(double* u, const double* w, const double* p, const double* q,
                       std::size_t n);
  const char* name;
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when unsupported (CPU or build)
const Ops& ops();       // selection result, cached after the first call

inline double dot(const double* x, const double* y, std::size_t n) { return ops().dot(x, y, n); }
inline double sum(const double* x, std::size_t n) { return ops().sum(x, n); }
inline void mul(double* o, const double* x, const double* y, std::size_t n) { ops().mul(o, x, y, n); }
inline void mobility(double* o, const double* r, std::size_t n) { ops().mobility(o, r, n); }
inline void axpy(double* y, double a, const double* x, std::size_t n) { ops().axpy(y, a, x, n); }
inline void ew_axpby(double* o, const double* a, const double* x, const double* b, const double* y,
                     std::size_t n) { ops().ew_axpby(o, a, x, b, y, n); }
inline void ew_acc_wdiff(double* u, const double* w, const double* p, const double* q,
                         std::size_t n) { ops().ew_acc_wdiff(u, w, p, q, n); }

}  // namespace abp::kern
