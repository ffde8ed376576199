#include "rtrap/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "rtrap/error.hpp"

namespace rtrap {

const char* to_string(Family f) {
  switch (f) {
    case Family::IdealPicketFence: return "ideal";
    case Family::DisturbedFence: return "disturbed";
    case Family::PowerLaw: return "power";
    case Family::BoundedPowerLaw: return "bounded";
    case Family::GoeUnfolded: return "goe";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "ideal") return Family::IdealPicketFence;
  if (name == "disturbed") return Family::DisturbedFence;
  if (name == "power") return Family::PowerLaw;
  if (name == "bounded") return Family::BoundedPowerLaw;
  if (name == "goe") return Family::GoeUnfolded;
  throw Error(ErrorCode::Validation, "unknown family '" + name + "'");
}

std::vector<double> ModelInstance::weights() const {
  std::vector<double> w(size());
  for (std::size_t i = 0; i < size(); ++i) w[i] = weight(i);
  return w;
}

double ModelInstance::total_weight() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += weight(i);
  return s;
}

double ModelInstance::mean_spacing() const {
  if (size() < 2) return 1.0;
  return (energies.back() - energies.front()) / static_cast<double>(size() - 1);
}

double ModelInstance::min_spacing() const {
  if (size() < 2) return 1.0;
  double m = energies[1] - energies[0];
  for (std::size_t i = 2; i < size(); ++i) m = std::min(m, energies[i] - energies[i - 1]);
  return m;
}

std::size_t ModelInstance::center_slot() const {
  if (firstIndex <= 0 && -firstIndex < static_cast<int>(size())) {
    return static_cast<std::size_t>(-firstIndex);
  }
  return 0;
}

double CouplingParam::phi() const {
  if (alpha == 0.0 && beta == 0.0) return 0.0;
  return std::atan2(beta, alpha);
}

CouplingParam CouplingParam::on_ray(double alpha, double phi) {
  return {alpha, alpha * std::tan(phi)};
}

namespace {

bool check_mirror(const std::vector<double>& e, const std::vector<double>& v) {
  const std::size_t m = e.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = m - 1 - i;
    if (e[i] != -e[j] || v[i] != v[j]) return false;
  }
  return true;
}

double signed_power(int k, double p) {
  const double mag = std::pow(std::abs(static_cast<double>(k)), p);
  return k < 0 ? -mag : mag;
}

}  // namespace

ModelInstance make_model(std::vector<double> energies, std::vector<double> couplings,
                         std::string label, int firstIndex) {
  if (energies.size() != couplings.size()) {
    throw Error(ErrorCode::Validation, "energies and couplings differ in length");
  }
  if (energies.empty()) throw Error(ErrorCode::Validation, "model has no levels");
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (!std::isfinite(energies[i]) || !std::isfinite(couplings[i])) {
      throw Error(ErrorCode::Validation, "non-finite level or coupling");
    }
    if (couplings[i] < 0.0) throw Error(ErrorCode::Validation, "negative coupling");
    if (i > 0 && !(energies[i] > energies[i - 1])) {
      throw Error(ErrorCode::Construction,
                  "levels not strictly increasing at slot " + std::to_string(i));
    }
  }
  ModelInstance m;
  m.mirrorSymmetric = check_mirror(energies, couplings);
  m.energies = std::move(energies);
  m.couplings = std::move(couplings);
  m.label = std::move(label);
  m.firstIndex = firstIndex;
  return m;
}

ModelInstance build_model(const SpectrumSpec& spec) {
  if (spec.n < 0) throw Error(ErrorCode::Validation, "N must be >= 0");
  if (!(spec.levelExponent > 0.0)) throw Error(ErrorCode::Validation, "p must be > 0");
  if (!(spec.couplingExponent >= 0.0)) throw Error(ErrorCode::Validation, "r must be >= 0");
  if (!(spec.varV >= 0.0)) throw Error(ErrorCode::Validation, "var_v must be >= 0");

  const int n = spec.n;
  std::vector<double> e, v;
  int first = -n;
  std::string label = to_string(spec.family);

  switch (spec.family) {
    case Family::IdealPicketFence:
    case Family::DisturbedFence:
      for (int k = -n; k <= n; ++k) {
        e.push_back(static_cast<double>(k));
        v.push_back(1.0);
      }
      if (spec.family == Family::DisturbedFence) {
        const double v0 = 1.0 + spec.disturbance;
        if (v0 < 0.0) throw Error(ErrorCode::Validation, "1 + D must be >= 0");
        v[static_cast<std::size_t>(n)] = v0;
      }
      break;
    case Family::PowerLaw: {
      const double offset = spec.couplingOffset ? 1.0 : 0.0;
      for (int k = -n; k <= n; ++k) {
        e.push_back(signed_power(k, spec.levelExponent));
        // pow(0, 0) == 1 keeps the r = 0 centre coupled without the offset.
        const double w = std::pow(std::abs(static_cast<double>(k)), spec.couplingExponent) + offset;
        v.push_back(std::sqrt(w));
      }
      break;
    }
    case Family::BoundedPowerLaw:
      first = 0;
      for (int k = 0; k <= n; ++k) {
        e.push_back(std::pow(static_cast<double>(k), spec.levelExponent));
        v.push_back(std::sqrt(std::pow(static_cast<double>(k), spec.couplingExponent) + 1.0));
      }
      break;
    case Family::GoeUnfolded: {
      const int m = 2 * n + 1;
      if (m < 3) throw Error(ErrorCode::Validation, "GOE family needs N >= 1");
      e = unfold_goe(sample_goe_spectrum(m, spec.seed));
      // Separate stream for couplings so the level sample does not depend on it.
      std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
      std::normal_distribution<double> gauss(spec.meanV, std::sqrt(spec.varV));
      for (int i = 0; i < m; ++i) v.push_back(std::abs(gauss(rng)));
      label += "(seed=" + std::to_string(spec.seed) + ")";
      break;
    }
  }
  return make_model(std::move(e), std::move(v), std::move(label), first);
}

std::vector<double> sample_goe_spectrum(int m, std::uint64_t seed) {
  if (m < 1) throw Error(ErrorCode::Validation, "GOE dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> offdiag(0.0, 1.0);
  std::normal_distribution<double> diag(0.0, std::numbers::sqrt2);
  Eigen::MatrixXd h(m, m);
  for (int i = 0; i < m; ++i) {
    h(i, i) = diag(rng);
    for (int j = i + 1; j < m; ++j) {
      const double x = offdiag(rng);
      h(i, j) = x;
      h(j, i) = x;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Construction, "GOE diagonalisation failed");
  }
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> unfold_goe(std::span<const double> raw) {
  const std::size_t m = raw.size();
  if (m < 3) throw Error(ErrorCode::Validation, "unfolding needs at least 3 levels");
  for (std::size_t i = 1; i < m; ++i) {
    if (!(raw[i] > raw[i - 1])) {
      throw Error(ErrorCode::Validation, "raw eigenvalues must be strictly increasing");
    }
  }
  // Semicircle fitted to the sample edges.
  const double centre = 0.5 * (raw.front() + raw.back());
  const double radius = 0.5 * (raw.back() - raw.front());
  const double md = static_cast<double>(m);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = std::clamp((raw[i] - centre) / radius, -1.0, 1.0);
    const double cdf = 0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / std::numbers::pi;
    out[i] = md * cdf;
  }
  // The edges map to 0 and M; rescale so the mean spacing is exactly one.
  const double scale = (md - 1.0) / (out.back() - out.front());
  const double origin = out.front();
  for (auto& x : out) x = (x - origin) * scale;
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / md;
  for (auto& x : out) x -= mean;
  for (std::size_t i = 1; i < m; ++i) {
    if (!(out[i] > out[i - 1])) {
      throw Error(ErrorCode::Construction, "unfolded spectrum is degenerate");
    }
  }
  return out;
}

}  // namespace rtrap
