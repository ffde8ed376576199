#include "rtrap/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rtrap/error.hpp"

namespace rtrap {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(ValueKind k) {
  switch (k) {
    case ValueKind::Finite: return "finite";
    case ValueKind::Divergent: return "divergent";
    case ValueKind::Zero: return "zero";
    case ValueKind::Infinite: return "infinite";
  }
  return "?";
}

Value ideal_width(double alpha) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::Validation, "alpha must be >= 0");
  const double x = kPi * alpha;
  if (x == 1.0) return Value::divergent();
  return Value::of(std::log(std::abs((1.0 + x) / (1.0 - x))) / kPi);
}

FiniteNEstimates finite_n_estimates(int n, double energy) {
  if (n < 1) throw Error(ErrorCode::Validation, "N must be >= 1");
  if (!(std::abs(energy) <= n)) throw Error(ErrorCode::Validation, "|energy| must not exceed N");
  FiniteNEstimates f;
  f.envelopeGammaHalf = energy == 0.0
                            ? Value::divergent()
                            : Value::of(std::log(n * kPi / std::abs(energy)) / (2.0 * kPi));
  f.broadWidthAtCrit = (1.0 + std::log(2.0 * kPi * n)) / (2.0 * kPi);
  f.traceSumAtCrit = (2.0 * n + 1.0) / kPi;
  return f;
}

double envelope_gamma_half_exact(int n, double energy) {
  if (n < 1) throw Error(ErrorCode::Validation, "N must be >= 1");
  if (energy == 0.0) throw Error(ErrorCode::OutOfDomain, "energy must be nonzero");
  const double arg = std::cos(2.0 * kPi * energy) -
                     n * kPi / (2.0 * energy) * std::sin(2.0 * kPi * energy);
  if (!(arg >= 1.0)) throw Error(ErrorCode::OutOfDomain, "arcosh argument below 1");
  return std::acosh(arg) / (2.0 * kPi);
}

double disturbed_alpha_of_mu(double mu, double d) {
  if (!(mu > 0.0)) throw Error(ErrorCode::Validation, "mu must be > 0");
  const double x = kPi * mu;
  const double den = d / x + 1.0 / std::tanh(x);
  if (!(den > 0.0)) throw Error(ErrorCode::NoSolution, "no branch at this mu");
  return 1.0 / (kPi * den);
}

std::vector<double> disturbed_mu_of_alpha(double alpha, double d, double muMin, double muMax) {
  if (!(muMin > 0.0 && muMax > muMin)) throw Error(ErrorCode::Validation, "bad mu range");
  auto f = [&](double mu) -> double {
    const double x = kPi * mu;
    const double den = d / x + 1.0 / std::tanh(x);
    if (!(den > 0.0)) return std::nan("");
    return 1.0 / (kPi * den) - alpha;
  };
  const int steps = 4000;
  const double ratio = std::log(muMax / muMin) / steps;
  std::vector<double> roots;
  double m0 = muMin, f0 = f(m0);
  for (int i = 1; i <= steps; ++i) {
    const double m1 = muMin * std::exp(ratio * i);
    const double f1 = f(m1);
    if (std::isfinite(f0) && std::isfinite(f1)) {
      if (f0 == 0.0) {
        roots.push_back(m0);
      } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
        double lo = m0, hi = m1, flo = f0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid);
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        roots.push_back(0.5 * (lo + hi));
      }
    }
    m0 = m1;
    f0 = f1;
  }
  return roots;
}

SingularityFit fit_disturbed_singularity(double d, double epsLo, double epsHi, int points) {
  if (d == 0.0) throw Error(ErrorCode::NoSolution, "no singular branch for D = 0");
  if (!(epsLo > 0.0 && epsHi > epsLo) || points < 3) {
    throw Error(ErrorCode::Validation, "bad epsilon window");
  }
  const double sign = d > 0.0 ? 1.0 : -1.0;
  std::vector<double> xs, ys;
  for (int i = 0; i < points; ++i) {
    const double eps = epsLo * std::pow(epsHi / epsLo, static_cast<double>(i) / (points - 1));
    const double alpha = (1.0 - sign * eps) / kPi;
    const auto mus = disturbed_mu_of_alpha(alpha, d, 1e-6, 1e9);
    if (mus.empty()) throw Error(ErrorCode::NoSolution, "no mu at eps = " + std::to_string(eps));
    xs.push_back(std::log(eps));
    ys.push_back(std::log(kPi * mus.back()));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (icept + slope * xs[i]);
    rss += r * r;
  }
  return {-slope, std::exp(icept), std::sqrt(rss / n)};
}

double diluted_alpha_of_mu(double mu) {
  if (!(mu > 0.0)) throw Error(ErrorCode::Validation, "mu must be > 0");
  const double q = std::sqrt(2.0 * mu);
  const double x = kPi * q;
  // Divided through by cosh x so large mu does not overflow.
  const double ch = std::cosh(x);
  const double num = 1.0 - std::cos(x) / ch;
  const double den = std::tanh(x) + std::sin(x) / ch;
  if (x < 1e-3) {
    // Series: (cosh - cos)/(sinh + sin) = x/2 (1 - x^4/180 + ...)
    return q / kPi * 0.5 * x;
  }
  return q / kPi * num / den;
}

Value power_law_critical(double r, double t) {
  if (!(r >= 0.0)) throw Error(ErrorCode::Validation, "r must be >= 0");
  if (!(t > 0.0)) throw Error(ErrorCode::Validation, "t must be > 0");
  const double lhs = 2.0 * (r + 1.0);
  if (std::abs(lhs - t) <= 1e-12 * std::max(lhs, t)) return Value::of((r + 1.0) / kPi);
  return lhs > t ? Value{ValueKind::Zero, 0.0} : Value{ValueKind::Infinite, 0.0};
}

double compensated_broad_width(int n, double r, double alpha) {
  if (n < 1) throw Error(ErrorCode::Validation, "N must be >= 1");
  if (!(r >= 0.0)) throw Error(ErrorCode::Validation, "r must be >= 0");
  const double crit = (r + 1.0) / kPi;
  if (!(alpha > crit)) throw Error(ErrorCode::OutOfDomain, "alpha must exceed (r+1)/pi");
  return 2.0 * std::pow(static_cast<double>(n), r + 1.0) / std::tan((r + 1.0) / (2.0 * alpha));
}

Value complex_coupling_width(double alpha, double beta) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::Validation, "alpha must be >= 0");
  const double x = kPi * alpha, y = kPi * beta;
  if (x == 1.0 && y == 0.0) return Value::divergent();
  const double num = (x + 1.0) * (x + 1.0) + y * y;
  const double den = (x - 1.0) * (x - 1.0) + y * y;
  return Value::of(std::log(num / den) / (2.0 * kPi));
}

}  // namespace rtrap
