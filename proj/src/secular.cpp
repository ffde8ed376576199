#include "rtrap/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rtrap/error.hpp"
#include "rtrap/kernels.hpp"

namespace rtrap {

namespace {
constexpr cplx kI{0.0, 1.0};
}

CoupledLevels::CoupledLevels(const ModelInstance& model) {
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double w = model.weight(i);
    if (w > 0.0) {
      energies_.push_back(model.energies[i]);
      weights_.push_back(w);
      couplings_.push_back(model.couplings[i]);
      slots_.push_back(i);
      totalWeight_ += w;
    } else {
      decoupled_.push_back(i);
    }
  }
}

SecularEval CoupledLevels::evaluate(cplx kappa, cplx lambda) const {
  if (lambda.imag() == 0.0 &&
      std::binary_search(energies_.begin(), energies_.end(), lambda.real())) {
    throw Error(ErrorCode::PoleHit, "lambda coincides with a coupled level");
  }
  const auto s = kernels::active().resolvent(energies_.data(), weights_.data(), size(), lambda);
  return {1.0 - kI * kappa * s.weighted, -kI * kappa * s.weightedSq};
}

cplx CoupledLevels::log_derivative(cplx kappa, cplx lambda) const {
  const auto s = kernels::active().resolvent(energies_.data(), weights_.data(), size(), lambda);
  const cplx f = 1.0 - kI * kappa * s.weighted;
  const cplx df = -kI * kappa * s.weightedSq;
  return df / f - s.plain;
}

SecularEval secular_value(const ModelInstance& model, const CouplingParam& kappa, cplx lambda) {
  return CoupledLevels(model).evaluate(kappa.kappa(), lambda);
}

LogPoly charpoly_logeval(const ModelInstance& model, const CouplingParam& kappa, cplx lambda) {
  const cplx k = kappa.kappa();
  double logMag = 0.0;
  double phase = 0.0;
  std::size_t hit = model.size();
  for (std::size_t i = 0; i < model.size(); ++i) {
    const cplx d = model.energies[i] - lambda;
    if (d == 0.0) {
      hit = i;
      continue;
    }
    logMag += std::log(std::abs(d));
    phase += std::arg(d);
  }

  cplx factor;
  if (hit < model.size()) {
    // On a bare level the product vanishes except for the -i kappa w_k term.
    factor = -kI * k * model.weight(hit);
  } else {
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
      const double w = model.weight(i);
      if (w == 0.0) continue;
      const cplx t = w / (model.energies[i] - lambda);
      sr += t.real();
      si += t.imag();
    }
    factor = 1.0 - kI * k * cplx(sr, si);
  }
  if (factor == 0.0) {
    return {-std::numeric_limits<double>::infinity(), 0.0};
  }
  logMag += std::log(std::abs(factor));
  phase += std::arg(factor);
  phase = std::remainder(phase, 2.0 * std::numbers::pi);
  return {logMag, phase};
}

cplx refine_root(const ModelInstance& model, const CouplingParam& kappa, cplx lambda0,
                 double tol) {
  const CoupledLevels levels(model);
  const cplx k = kappa.kappa();
  cplx lambda = lambda0;
  double prevStep = 0.0;
  int linearRun = 0;
  bool doubleRoot = false;
  constexpr int kMaxIter = 200;
  for (int it = 0; it < kMaxIter; ++it) {
    const SecularEval ev = levels.evaluate(k, lambda);
    if (ev.value == 0.0) return lambda;
    if (ev.derivative == 0.0) {
      throw Error(ErrorCode::CollisionSuspected, "vanishing derivative of the secular function");
    }
    cplx step = ev.value / ev.derivative;
    if (doubleRoot) step *= 2.0;
    lambda -= step;
    const double s = std::abs(step);
    if (s <= tol * std::max(1.0, std::abs(lambda))) return lambda;

    // Newton halves the error at a double root.
    if (!doubleRoot && prevStep > 0.0) {
      const double ratio = s / prevStep;
      linearRun = (ratio > 0.4 && ratio < 0.6) ? linearRun + 1 : 0;
      if (linearRun >= 6) doubleRoot = true;
    }
    prevStep = s;
  }
  throw Error(ErrorCode::Diverged, "Newton did not converge; last iterate (" +
                                       std::to_string(lambda.real()) + ", " +
                                       std::to_string(lambda.imag()) + ")");
}

std::vector<TrappedAsymptote> trapped_asymptotes(const ModelInstance& model) {
  const CoupledLevels levels(model);
  const std::size_t m = levels.size();
  if (m < 2) return {};
  const auto& e = levels.energies();
  const auto& w = levels.weights();
  const auto& kern = kernels::active();

  std::vector<double> pos(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    // sum_k w_k/(x - E_k) falls from +inf to -inf across the gap.
    double lo = e[i], hi = e[i + 1];
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
      if (kern.real_resolvent(e.data(), w.data(), m, mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    pos[i] = 0.5 * (lo + hi);
  }

  const double logW = std::log(levels.total_weight());
  std::vector<TrappedAsymptote> out(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double x = pos[i];
    double logNum = 0.0, logDen = logW;
    int sign = -1;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = e[j] - x;
      logNum += std::log(std::abs(d));
      if (d < 0) sign = -sign;
    }
    for (std::size_t j = 0; j + 1 < m; ++j) {
      if (j == i) continue;
      const double d = pos[j] - x;
      logDen += std::log(std::abs(d));
      if (d < 0) sign = -sign;
    }
    out[i] = {x, sign * std::exp(logNum - logDen)};
  }
  return out;
}

}  // namespace rtrap
