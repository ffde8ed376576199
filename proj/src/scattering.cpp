#include "rtrap/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rtrap/error.hpp"
#include "rtrap/kernels.hpp"
#include "rtrap/parallel.hpp"

namespace rtrap {

namespace {
constexpr cplx kI{0.0, 1.0};
}

cplx s_matrix_element(const ModelInstance& model, const CouplingParam& kappa, double energy) {
  const auto& e = model.energies;
  auto it = std::lower_bound(e.begin(), e.end(), energy);
  for (auto jt : {it, it == e.begin() ? it : it - 1}) {
    if (jt == e.end()) continue;
    const std::size_t k = static_cast<std::size_t>(jt - e.begin());
    if (model.couplings[k] != 0.0 && std::abs(*jt - energy) < 1e-12) {
      throw Error(ErrorCode::PoleHit, "energy " + std::to_string(energy) + " is on a bare level");
    }
  }
  const std::vector<double> w = model.weights();
  const double kk = kernels::active().real_resolvent(e.data(), w.data(), e.size(), energy);
  const cplx t = kI * kappa.kappa() * kk;
  return (1.0 - t) / (1.0 + t);
}

std::vector<Residue> residues(const ModelInstance& model, const CouplingParam& kappa,
                              const std::vector<EigenSolution>& eigenpairs) {
  std::vector<Residue> out;
  out.reserve(eigenpairs.size());
  const cplx k = kappa.kappa();
  for (const auto& s : eigenpairs) {
    if (s.coeffs.size() != model.size()) {
      throw Error(ErrorCode::Validation, "residues need eigenvector coefficients");
    }
    cplx va = 0.0;
    for (std::size_t j = 0; j < model.size(); ++j) va += s.coeffs[j] * model.couplings[j];
    Residue r;
    r.gammaSq = -2.0 * k * va * va;
    const double a = std::abs(r.gammaSq);
    r.widthRatio = a > 0.0 ? -2.0 * s.lambda.imag() * s.normSq / a : 0.0;
    out.push_back(r);
  }
  return out;
}

cplx pole_expansion(const std::vector<Residue>& res, const std::vector<EigenSolution>& eigenpairs,
                    double energy) {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i) sum += res[i].gammaSq / (energy - eigenpairs[i].lambda);
  return 1.0 + kI * sum;
}

CrossSectionProfile cross_section(const ModelInstance& model, const CouplingParam& kappa,
                                  const std::vector<double>& energyGrid, double windowWidth) {
  if (!(windowWidth >= 0.0)) throw Error(ErrorCode::Validation, "window width must be >= 0");
  for (std::size_t i = 1; i < energyGrid.size(); ++i) {
    if (!(energyGrid[i] > energyGrid[i - 1])) {
      throw Error(ErrorCode::Validation, "energy grid must be strictly increasing");
    }
  }
  CrossSectionProfile p;
  p.energyGrid = energyGrid;
  p.windowWidth = windowWidth;
  const std::size_t n = energyGrid.size();
  p.raw.resize(n);
  parallel_for(n, 256, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) p.raw[i] = std::norm(1.0 - s_matrix_element(model, kappa, energyGrid[i]));
  });

  p.averaged.resize(n);
  if (windowWidth == 0.0) {
    p.averaged = p.raw;
    return p;
  }
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + p.raw[i];
  const double half = 0.5 * windowWidth;
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (energyGrid[lo] < energyGrid[i] - half) ++lo;
    while (hi < n && energyGrid[hi] <= energyGrid[i] + half) ++hi;
    p.averaged[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return p;
}

std::vector<double> default_energy_grid(const ModelInstance& model, int pointsPerSpacing,
                                        double marginSpacings) {
  if (pointsPerSpacing < 1) throw Error(ErrorCode::Validation, "points per spacing must be >= 1");
  if (!(marginSpacings >= 0.0)) throw Error(ErrorCode::Validation, "margin must be >= 0");
  const auto& e = model.energies;
  if (e.empty()) return {};
  const double sp = e.size() > 1 ? model.mean_spacing() : 1.0;
  const double step = sp / pointsPerSpacing;
  std::vector<double> g;
  const int outer = static_cast<int>(std::lround(marginSpacings * pointsPerSpacing));
  for (int j = outer - 1; j >= 0; --j) g.push_back(e.front() - (j + 0.5) * step);
  for (std::size_t k = 0; k + 1 < e.size(); ++k) {
    const double gap = e[k + 1] - e[k];
    const long cnt = std::max(1L, std::lround(gap / step));
    const double h = gap / static_cast<double>(cnt);
    for (long j = 0; j < cnt; ++j) g.push_back(e[k] + (j + 0.5) * h);
  }
  for (int j = 0; j < outer; ++j) g.push_back(e.back() + (j + 0.5) * step);
  return g;
}

double support_fraction(const CrossSectionProfile& p, double lo, double hi, double threshold) {
  double peak = 0.0;
  for (double v : p.averaged) peak = std::max(peak, v);
  std::size_t in = 0, above = 0;
  for (std::size_t i = 0; i < p.energyGrid.size(); ++i) {
    if (p.energyGrid[i] < lo || p.energyGrid[i] > hi) continue;
    ++in;
    if (p.averaged[i] > threshold * peak) ++above;
  }
  return in == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(in);
}

}  // namespace rtrap
