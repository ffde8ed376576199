#pragma once

// Data-parallel inner loops of the solver. Every kernel has a scalar
// reference and, where the CPU allows, an AVX2/FMA variant picked at run time.
// The variants differ only in summation order.

#include <complex>
#include <cstddef>
#include <string_view>

namespace rtrap::kernels {

using cplx = std::complex<double>;

struct ResolventSums {
  cplx weighted;    // sum_k w_k / (E_k - z)
  cplx weightedSq;  // sum_k w_k / (E_k - z)^2
  cplx plain;       // sum_k 1 / (E_k - z)
};

// With u_j = c_j / (E_j - z):
struct Moments {
  cplx sumSq;      // sum_j u_j^2 (bilinear)
  double sumAbs2;  // sum_j |u_j|^2
  double sumAbs4;  // sum_j |u_j|^4
};

struct Dispatch {
  const char* name;
  ResolventSums (*resolvent)(const double* e, const double* w, std::size_t n, cplx z);
  // sum_{j != skip} 1 / (z - r_j), roots given as split re/im arrays
  cplx (*repulsion)(const double* re, const double* im, std::size_t n, std::size_t skip, cplx z);
  Moments (*moments)(const double* e, const double* c, std::size_t n, cplx z);
  // sum_k w_k / (x - E_k) for real x
  double (*real_resolvent)(const double* e, const double* w, std::size_t n, double x);
};

const Dispatch& scalar();

/// nullptr when the build or the CPU lacks AVX2+FMA.
const Dispatch* avx2();

/// Kernels used by the library. Defaults to the widest supported set;
/// RTRAP_SIMD=scalar in the environment forces the reference path.
const Dispatch& active();

/// Test hook: "scalar", "avx2" or "auto". Returns false if unavailable.
bool select(std::string_view name);

}  // namespace rtrap::kernels
