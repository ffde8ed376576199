// Compiled with -mavx2 -mfma; only reached through kernels::avx2() after a CPU check.
#include <immintrin.h>

#include "rtrap/kernels.hpp"

namespace rtrap::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

ResolventSums resolvent_avx2(const double* e, const double* w, std::size_t n, cplx z) {
  const double x = z.real(), y = z.imag();
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d y2 = _mm256_set1_pd(y * y);
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d wr = _mm256_setzero_pd(), wi = wr, sr = wr, si = wr, pr = wr, pi = wr;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(e + k), vx);
    const __m256d wk = _mm256_loadu_pd(w + k);
    const __m256d q = _mm256_fmadd_pd(a, a, y2);
    const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), q);
    const __m256d re = _mm256_mul_pd(a, inv);
    const __m256d im = _mm256_mul_pd(vy, inv);
    pr = _mm256_add_pd(pr, re);
    pi = _mm256_add_pd(pi, im);
    wr = _mm256_fmadd_pd(wk, re, wr);
    wi = _mm256_fmadd_pd(wk, im, wi);
    const __m256d sq = _mm256_fmsub_pd(re, re, _mm256_mul_pd(im, im));
    sr = _mm256_fmadd_pd(wk, sq, sr);
    si = _mm256_fmadd_pd(wk, _mm256_mul_pd(two, _mm256_mul_pd(re, im)), si);
  }
  double swr = hsum(wr), swi = hsum(wi), ssr = hsum(sr), ssi = hsum(si), spr = hsum(pr),
         spi = hsum(pi);
  for (; k < n; ++k) {
    const double a = e[k] - x;
    const double q = a * a + y * y;
    const double re = a / q, im = y / q;
    spr += re;
    spi += im;
    swr += w[k] * re;
    swi += w[k] * im;
    ssr += w[k] * (re * re - im * im);
    ssi += w[k] * (2.0 * re * im);
  }
  return {{swr, swi}, {ssr, ssi}, {spr, spi}};
}

inline void repulsion_block(const double* re, const double* im, std::size_t begin,
                            std::size_t end, cplx z, double& outr, double& outi) {
  const __m256d zr = _mm256_set1_pd(z.real());
  const __m256d zi = _mm256_set1_pd(z.imag());
  __m256d sr = _mm256_setzero_pd(), si = sr;
  std::size_t j = begin;
  for (; j + 4 <= end; j += 4) {
    const __m256d a = _mm256_sub_pd(zr, _mm256_loadu_pd(re + j));
    const __m256d b = _mm256_sub_pd(zi, _mm256_loadu_pd(im + j));
    const __m256d q = _mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b));
    const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), q);
    sr = _mm256_fmadd_pd(a, inv, sr);
    si = _mm256_fnmadd_pd(b, inv, si);
  }
  double r = hsum(sr), i = hsum(si);
  for (; j < end; ++j) {
    const double a = z.real() - re[j];
    const double b = z.imag() - im[j];
    const double q = a * a + b * b;
    r += a / q;
    i -= b / q;
  }
  outr += r;
  outi += i;
}

cplx repulsion_avx2(const double* re, const double* im, std::size_t n, std::size_t skip, cplx z) {
  double r = 0, i = 0;
  if (skip < n) {
    repulsion_block(re, im, 0, skip, z, r, i);
    repulsion_block(re, im, skip + 1, n, z, r, i);
  } else {
    repulsion_block(re, im, 0, n, z, r, i);
  }
  return {r, i};
}

Moments moments_avx2(const double* e, const double* c, std::size_t n, cplx z) {
  const double x = z.real(), y = z.imag();
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d y2 = _mm256_set1_pd(y * y);
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d qr = _mm256_setzero_pd(), qi = qr, s2 = qr, s4 = qr;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(e + j), vx);
    const __m256d cj = _mm256_loadu_pd(c + j);
    const __m256d c2 = _mm256_mul_pd(cj, cj);
    const __m256d q = _mm256_fmadd_pd(a, a, y2);
    const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), q);
    const __m256d re = _mm256_mul_pd(a, inv);
    const __m256d im = _mm256_mul_pd(vy, inv);
    qr = _mm256_fmadd_pd(c2, _mm256_fmsub_pd(re, re, _mm256_mul_pd(im, im)), qr);
    qi = _mm256_fmadd_pd(c2, _mm256_mul_pd(two, _mm256_mul_pd(re, im)), qi);
    const __m256d m2 = _mm256_mul_pd(c2, inv);
    s2 = _mm256_add_pd(s2, m2);
    s4 = _mm256_fmadd_pd(m2, m2, s4);
  }
  double sqr = hsum(qr), sqi = hsum(qi), a2 = hsum(s2), a4 = hsum(s4);
  for (; j < n; ++j) {
    const double a = e[j] - x;
    const double q = a * a + y * y;
    const double c2 = c[j] * c[j];
    const double re = a / q, im = y / q;
    sqr += c2 * (re * re - im * im);
    sqi += c2 * (2.0 * re * im);
    const double m2 = c2 / q;
    a2 += m2;
    a4 += m2 * m2;
  }
  return {{sqr, sqi}, a2, a4};
}

double real_resolvent_avx2(const double* e, const double* w, std::size_t n, double x) {
  const __m256d vx = _mm256_set1_pd(x);
  __m256d s = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(vx, _mm256_loadu_pd(e + k));
    s = _mm256_add_pd(s, _mm256_div_pd(_mm256_loadu_pd(w + k), d));
  }
  double r = hsum(s);
  for (; k < n; ++k) r += w[k] / (x - e[k]);
  return r;
}

}  // namespace

const Dispatch& avx2_table() {
  static const Dispatch d{"avx2", resolvent_avx2, repulsion_avx2, moments_avx2,
                          real_resolvent_avx2};
  return d;
}

}  // namespace rtrap::kernels
