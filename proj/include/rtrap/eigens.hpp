#pragma once

#include <cstddef>
#include <vector>

#include "rtrap/model.hpp"
#include "rtrap/secular.hpp"

namespace rtrap {

/// Right eigenvector in the bare basis, normalised bilinearly: sum_j a_j^2 = 1.
/// The left eigenvector is its transpose.
struct EigenSolution {
  cplx lambda;
  std::vector<cplx> coeffs;  // empty when only the metrics were requested
  double normSq = 1.0;       // <Phi|Phi> = sum_j |a_j|^2
  double npc = 1.0;          // number of principal components, in [1/M, 1]
};

/// Rebuilds the eigenvector from lambda with a_j ~ v_j / (E_j - lambda).
/// Throws NotAnEigenvalue when |F(lambda)| exceeds residualTol (relative),
/// SelfOrthogonal at an exceptional point.
EigenSolution eigenvector(const ModelInstance& model, const CouplingParam& kappa, cplx lambda,
                          double residualTol = 1e-6);

/// normSq and npc only, O(M) without materialising the coefficients.
EigenSolution eigen_metrics(const ModelInstance& model, const CouplingParam& kappa, cplx lambda,
                            double residualTol = 1e-6);

struct Observables {
  double B = 1.0;  // mean of normSq
  std::vector<double> norms;
  std::vector<double> npcs;
};

Observables observables(const std::vector<EigenSolution>& solutions);

/// B^(n): mean of normSq over the listed states.
double partial_b(const std::vector<EigenSolution>& solutions, const std::vector<std::size_t>& subset);

struct OraclePair {
  cplx lambda;
  std::vector<cplx> coeffs;  // bilinear normalised when possible, else unit 2-norm
};

/// Dense diagonalisation of diag(E) - i kappa v v^T (M <= 2000).
std::vector<OraclePair> dense_oracle(const ModelInstance& model, const CouplingParam& kappa);

/// Minimal-total-distance matching of two eigenvalue multisets (Hungarian method):
/// a[i] pairs with b[result[i]].
std::vector<std::size_t> match_multisets(const std::vector<cplx>& a, const std::vector<cplx>& b);

/// Largest distance over the pairs of match_multisets.
double multiset_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace rtrap
