#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rtrap {

enum class Family {
  IdealPicketFence,  // E_k = k, v_k = 1
  DisturbedFence,    // ideal fence with v_0 = 1 + D
  PowerLaw,          // E_k = sign(k)|k|^p, v_k^2 = |k|^r (+1)
  BoundedPowerLaw,   // E_k = k^p, v_k^2 = k^r + 1, k = 0..N
  GoeUnfolded,       // unfolded GOE levels, Gaussian couplings
};

const char* to_string(Family f);
Family family_from_string(const std::string& name);

struct SpectrumSpec {
  Family family = Family::IdealPicketFence;
  int n = 0;
  double disturbance = 0.0;       // D
  double levelExponent = 1.0;     // p
  double couplingExponent = 0.0;  // r
  bool couplingOffset = true;     // PowerLaw: v_k^2 = |k|^r + 1 when set
  std::uint64_t seed = 0;
  double meanV = 1.0;
  double varV = 0.01;
};

/// One realisation of the bare system: sorted levels and their channel couplings.
/// Element i corresponds to the physical label k = firstIndex + i.
struct ModelInstance {
  std::vector<double> energies;
  std::vector<double> couplings;
  std::string label;
  int firstIndex = 0;
  bool mirrorSymmetric = false;  // E_{-k} = -E_k and v_{-k} = v_k bit for bit

  std::size_t size() const { return energies.size(); }
  int index_of(std::size_t i) const { return firstIndex + static_cast<int>(i); }
  double weight(std::size_t i) const { return couplings[i] * couplings[i]; }
  std::vector<double> weights() const;
  double total_weight() const;
  double mean_spacing() const;
  double min_spacing() const;
  /// Position of the k = 0 level (or the lowest level for bounded spectra).
  std::size_t center_slot() const;
};

/// Complex coupling kappa = alpha + i beta.
struct CouplingParam {
  double alpha = 0.0;
  double beta = 0.0;

  std::complex<double> kappa() const { return {alpha, beta}; }
  double phi() const;
  /// Point on the ray beta = alpha tan(phi).
  static CouplingParam on_ray(double alpha, double phi);
};

ModelInstance build_model(const SpectrumSpec& spec);

/// Wraps user supplied levels; validates ordering and couplings.
ModelInstance make_model(std::vector<double> energies, std::vector<double> couplings,
                         std::string label, int firstIndex = 0);

/// Semicircle unfolding to unit mean spacing, centred at zero.
std::vector<double> unfold_goe(std::span<const double> rawEigenvalues);

/// Sorted eigenvalues of one GOE matrix of dimension m.
std::vector<double> sample_goe_spectrum(int m, std::uint64_t seed);

}  // namespace rtrap
