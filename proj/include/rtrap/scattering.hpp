#pragma once

#include <vector>

#include "rtrap/eigens.hpp"
#include "rtrap/model.hpp"
#include "rtrap/secular.hpp"

namespace rtrap {

/// One-channel S(E) = (1 - i kappa K)/(1 + i kappa K), K = sum_k w_k / (E - E_k).
/// Throws PoleHit within 1e-12 of a coupled bare level.
cplx s_matrix_element(const ModelInstance& model, const CouplingParam& kappa, double energy);

struct Residue {
  cplx gammaSq;         // residue of S at lambda_k divided by i: -2 kappa (v . a_k)^2
  double widthRatio;    // Gamma_k <Phi_k|Phi_k> / |gammaSq|
};

/// Needs eigenpairs with coefficients (see eigenvector()).
std::vector<Residue> residues(const ModelInstance& model, const CouplingParam& kappa,
                              const std::vector<EigenSolution>& eigenpairs);

/// 1 + i sum_k gammaSq_k / (E - lambda_k); equals S(E) for a complete set.
cplx pole_expansion(const std::vector<Residue>& res, const std::vector<EigenSolution>& eigenpairs,
                    double energy);

struct CrossSectionProfile {
  std::vector<double> energyGrid;
  std::vector<double> raw;       // |1 - S(E)|^2
  std::vector<double> averaged;  // moving window mean
  double windowWidth = 0.0;
};

CrossSectionProfile cross_section(const ModelInstance& model, const CouplingParam& kappa,
                                  const std::vector<double>& energyGrid, double windowWidth = 1.0);

/// pointsPerSpacing points per mean spacing, placed at half-step offsets inside
/// every gap so no point lands on a level; marginSpacings extends both ends.
std::vector<double> default_energy_grid(const ModelInstance& model, int pointsPerSpacing = 20,
                                        double marginSpacings = 2.0);

/// Share of grid points in [lo, hi] whose averaged value exceeds threshold * max.
double support_fraction(const CrossSectionProfile& p, double lo, double hi, double threshold = 0.1);

}  // namespace rtrap
