#include "rtrap/kernels.hpp"

namespace rtrap::kernels {
namespace {

ResolventSums resolvent_scalar(const double* e, const double* w, std::size_t n, cplx z) {
  const double x = z.real(), y = z.imag();
  double wr = 0, wi = 0, sr = 0, si = 0, pr = 0, pi = 0;
  for (std::size_t k = 0; k < n; ++k) {
    // 1/(E - z) = (a + i b) / q with a = E - x, b = y
    const double a = e[k] - x;
    const double q = a * a + y * y;
    const double re = a / q, im = y / q;
    pr += re;
    pi += im;
    wr += w[k] * re;
    wi += w[k] * im;
    sr += w[k] * (re * re - im * im);
    si += w[k] * (2.0 * re * im);
  }
  return {{wr, wi}, {sr, si}, {pr, pi}};
}

cplx repulsion_scalar(const double* re, const double* im, std::size_t n, std::size_t skip, cplx z) {
  double sr = 0, si = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == skip) continue;
    const double a = z.real() - re[j];
    const double b = z.imag() - im[j];
    const double q = a * a + b * b;
    sr += a / q;
    si -= b / q;
  }
  return {sr, si};
}

Moments moments_scalar(const double* e, const double* c, std::size_t n, cplx z) {
  const double x = z.real(), y = z.imag();
  double qr = 0, qi = 0, s2 = 0, s4 = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = e[j] - x;
    const double q = a * a + y * y;
    const double c2 = c[j] * c[j];
    const double re = a / q, im = y / q;
    qr += c2 * (re * re - im * im);
    qi += c2 * (2.0 * re * im);
    const double m2 = c2 / q;
    s2 += m2;
    s4 += m2 * m2;
  }
  return {{qr, qi}, s2, s4};
}

double real_resolvent_scalar(const double* e, const double* w, std::size_t n, double x) {
  double s = 0;
  for (std::size_t k = 0; k < n; ++k) s += w[k] / (x - e[k]);
  return s;
}

}  // namespace

const Dispatch& scalar() {
  static const Dispatch d{"scalar", resolvent_scalar, repulsion_scalar, moments_scalar,
                          real_resolvent_scalar};
  return d;
}

}  // namespace rtrap::kernels
