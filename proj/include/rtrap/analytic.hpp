#pragma once

#include <map>
#include <string>
#include <vector>

namespace rtrap {

enum class ValueKind { Finite, Divergent, Zero, Infinite };
const char* to_string(ValueKind k);

/// A closed-form result; value is meaningful only for Finite.
struct Value {
  ValueKind kind = ValueKind::Finite;
  double value = 0.0;

  bool finite() const { return kind == ValueKind::Finite; }
  static Value of(double v) { return {ValueKind::Finite, v}; }
  static Value divergent() { return {ValueKind::Divergent, 0.0}; }
};

struct AnalyticPrediction {
  std::string name;
  std::map<std::string, double> inputs;
  Value value;
};

/// Broad-state-free width of the infinite ideal fence; diverges at alpha = 1/pi.
Value ideal_width(double alpha);

struct FiniteNEstimates {
  Value envelopeGammaHalf;  // (1/2pi) ln(N pi / |E|)
  double broadWidthAtCrit;  // (1/2pi)(1 + ln(2 pi N))
  double traceSumAtCrit;    // (2N + 1) / pi
};
FiniteNEstimates finite_n_estimates(int n, double energy);

/// Gamma/2 at alpha = 1/pi from the arcosh expression the envelope approximates.
/// Throws OutOfDomain where the arcosh argument drops below 1.
double envelope_gamma_half_exact(int n, double energy);

/// alpha(mu) of the disturbed fence. Throws NoSolution where the branch does not exist.
double disturbed_alpha_of_mu(double mu, double d);

/// Every mu > 0 with disturbed_alpha_of_mu(mu, d) = alpha on mu in [muMin, muMax], ascending.
std::vector<double> disturbed_mu_of_alpha(double alpha, double d, double muMin = 1e-6,
                                          double muMax = 1e6);

struct SingularityFit {
  double exponent;   // s in pi mu ~ c / eps^s
  double prefactor;  // c
  double residual;   // rms of the log-log fit
};

/// Least squares of log(pi mu) against log eps, eps = |1 - pi alpha| in [epsLo, epsHi],
/// on the large-mu branch.
SingularityFit fit_disturbed_singularity(double d, double epsLo = 1e-4, double epsHi = 1e-2,
                                         int points = 25);

double diluted_alpha_of_mu(double mu);

/// (r+1)/pi when 2(r+1) = t, Zero marker when 2(r+1) > t, Infinite marker otherwise.
Value power_law_critical(double r, double t);

/// Broad width above the compensated critical point. Throws OutOfDomain for alpha <= (r+1)/pi.
double compensated_broad_width(int n, double r, double alpha);

/// Width for kappa = alpha + i beta; Divergent only at (1/pi, 0).
Value complex_coupling_width(double alpha, double beta);

}  // namespace rtrap
