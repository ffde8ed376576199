#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rtrap/model.hpp"

namespace rtrap {

using cplx = std::complex<double>;

/// F(lambda) = 1 - i kappa sum_k w_k / (E_k - lambda) and its lambda-derivative.
struct SecularEval {
  cplx value;
  cplx derivative;
};

/// The coupled part of a model laid out contiguously for the kernels.
/// Levels with v_k = 0 decouple exactly and are kept aside.
class CoupledLevels {
 public:
  explicit CoupledLevels(const ModelInstance& model);

  std::size_t size() const { return energies_.size(); }
  const std::vector<double>& energies() const { return energies_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& couplings() const { return couplings_; }
  /// Model slot of coupled level i.
  std::size_t slot(std::size_t i) const { return slots_[i]; }
  const std::vector<std::size_t>& decoupled_slots() const { return decoupled_; }
  double total_weight() const { return totalWeight_; }

  /// Throws PoleHit when lambda sits exactly on a coupled level.
  SecularEval evaluate(cplx kappa, cplx lambda) const;

  /// p'/p for p(lambda) = prod_k (E_k - lambda) F(lambda) over the coupled levels,
  /// i.e. the reciprocal Newton step of the characteristic polynomial.
  cplx log_derivative(cplx kappa, cplx lambda) const;

 private:
  std::vector<double> energies_;
  std::vector<double> weights_;
  std::vector<double> couplings_;
  std::vector<std::size_t> slots_;
  std::vector<std::size_t> decoupled_;
  double totalWeight_ = 0.0;
};

SecularEval secular_value(const ModelInstance& model, const CouplingParam& kappa, cplx lambda);

/// log|P_N(lambda)| and arg P_N(lambda) of the characteristic polynomial.
/// logMagnitude is -infinity exactly at a root.
struct LogPoly {
  double logMagnitude;
  double phase;
};
LogPoly charpoly_logeval(const ModelInstance& model, const CouplingParam& kappa, cplx lambda);

/// Newton corrector on F. A double root (linear convergence) is finished with the
/// multiplicity-two step; a vanishing derivative raises CollisionSuspected.
cplx refine_root(const ModelInstance& model, const CouplingParam& kappa, cplx lambda0,
                 double tol = 1e-13);

struct TrappedAsymptote {
  double position;     // limit of Re lambda for alpha -> infinity
  double coefficient;  // g_k in lambda = position - i g_k / alpha
};

/// One entry per gap between adjacent coupled levels, in increasing order.
std::vector<TrappedAsymptote> trapped_asymptotes(const ModelInstance& model);

}  // namespace rtrap
