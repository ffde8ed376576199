#include "rtrap/eigens.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rtrap/error.hpp"
#include "rtrap/kernels.hpp"

namespace rtrap {

namespace {

constexpr cplx kI{0.0, 1.0};

// Bare level that is itself the eigenstate (decoupled, or kappa = 0), or size().
std::size_t decoupled_hit(const ModelInstance& model, const CouplingParam& kappa, cplx lambda) {
  if (lambda.imag() != 0.0) return model.size();
  const bool free = kappa.kappa() == 0.0;
  for (std::size_t j = 0; j < model.size(); ++j) {
    if ((free || model.couplings[j] == 0.0) && model.energies[j] == lambda.real()) return j;
  }
  if (free) throw Error(ErrorCode::NotAnEigenvalue, "at zero coupling lambda must be a bare level");
  return model.size();
}

void check_residual(const ModelInstance& model, const CouplingParam& kappa, cplx lambda, double tol) {
  const cplx k = kappa.kappa();
  cplx s = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < model.size(); ++j) {
    const double w = model.weight(j);
    if (w == 0.0) continue;
    const cplx d = model.energies[j] - lambda;
    if (d == 0.0) throw Error(ErrorCode::NotAnEigenvalue, "lambda sits on a coupled bare level");
    s += w / d;
    scale += w / std::abs(d);
  }
  const double res = std::abs(1.0 - kI * k * s);
  if (!(res <= tol * std::max(1.0, std::abs(k) * scale))) {
    throw Error(ErrorCode::NotAnEigenvalue,
                "secular residual " + std::to_string(res) + " at lambda = (" +
                    std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) + ")");
  }
}

EigenSolution metrics_from_moments(cplx lambda, const kernels::Moments& mo, std::size_t m) {
  if (std::abs(mo.sumSq) < 1e-12 * mo.sumAbs2) {
    throw Error(ErrorCode::SelfOrthogonal, "eigenvector is self-orthogonal at lambda = (" +
                                               std::to_string(lambda.real()) + ", " +
                                               std::to_string(lambda.imag()) + ")");
  }
  EigenSolution s;
  s.lambda = lambda;
  s.normSq = mo.sumAbs2 / std::abs(mo.sumSq);
  s.npc = mo.sumAbs2 * mo.sumAbs2 / (static_cast<double>(m) * mo.sumAbs4);
  return s;
}

}  // namespace

EigenSolution eigen_metrics(const ModelInstance& model, const CouplingParam& kappa, cplx lambda,
                            double residualTol) {
  const std::size_t m = model.size();
  if (decoupled_hit(model, kappa, lambda) < m) {
    EigenSolution s;
    s.lambda = lambda;
    s.normSq = 1.0;
    s.npc = 1.0 / static_cast<double>(m);
    return s;
  }
  check_residual(model, kappa, lambda, residualTol);
  const auto mo = kernels::active().moments(model.energies.data(), model.couplings.data(), m, lambda);
  return metrics_from_moments(lambda, mo, m);
}

EigenSolution eigenvector(const ModelInstance& model, const CouplingParam& kappa, cplx lambda,
                          double residualTol) {
  EigenSolution s = eigen_metrics(model, kappa, lambda, residualTol);
  const std::size_t m = model.size();
  s.coeffs.assign(m, cplx(0.0));
  const std::size_t hit = decoupled_hit(model, kappa, lambda);
  if (hit < m) {
    s.coeffs[hit] = 1.0;
    return s;
  }
  cplx sq = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    s.coeffs[j] = model.couplings[j] / (model.energies[j] - lambda);
    sq += s.coeffs[j] * s.coeffs[j];
  }
  const cplx norm = std::sqrt(sq);
  for (auto& a : s.coeffs) a /= norm;
  return s;
}

Observables observables(const std::vector<EigenSolution>& solutions) {
  Observables o;
  o.norms.reserve(solutions.size());
  o.npcs.reserve(solutions.size());
  double sum = 0.0;
  for (const auto& s : solutions) {
    o.norms.push_back(s.normSq);
    o.npcs.push_back(s.npc);
    sum += s.normSq;
  }
  o.B = solutions.empty() ? 1.0 : sum / static_cast<double>(solutions.size());
  return o;
}

double partial_b(const std::vector<EigenSolution>& solutions, const std::vector<std::size_t>& subset) {
  if (subset.empty()) return 1.0;
  double sum = 0.0;
  for (std::size_t i : subset) {
    if (i >= solutions.size()) throw Error(ErrorCode::Validation, "state index out of range");
    sum += solutions[i].normSq;
  }
  return sum / static_cast<double>(subset.size());
}

std::vector<OraclePair> dense_oracle(const ModelInstance& model, const CouplingParam& kappa) {
  const auto m = static_cast<Eigen::Index>(model.size());
  if (m > 2000) throw Error(ErrorCode::Validation, "dense oracle limited to M <= 2000");
  if (m == 0) return {};
  const cplx k = kappa.kappa();
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(model.couplings.data(), m);
  Eigen::MatrixXcd h = (-kI * k) * (v * v.transpose()).cast<cplx>();
  for (Eigen::Index i = 0; i < m; ++i) h(i, i) += model.energies[static_cast<std::size_t>(i)];

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h, true);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::OracleFailure, "dense eigensolver did not converge");
  }
  std::vector<OraclePair> out(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    auto& p = out[static_cast<std::size_t>(i)];
    p.lambda = es.eigenvalues()(i);
    Eigen::VectorXcd a = es.eigenvectors().col(i);
    const cplx sq = (a.array() * a.array()).sum();
    if (std::abs(sq) > 1e-12) a /= std::sqrt(sq);
    p.coeffs.assign(a.data(), a.data() + m);
  }
  std::sort(out.begin(), out.end(), [](const OraclePair& x, const OraclePair& y) {
    return x.lambda.real() != y.lambda.real() ? x.lambda.real() < y.lambda.real()
                                              : x.lambda.imag() < y.lambda.imag();
  });
  return out;
}

std::vector<std::size_t> match_multisets(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::Validation, "multisets differ in size");
  const std::size_t n = a.size();
  if (n == 0) return {};
  // Hungarian method, 1-based potentials (e-maxx formulation).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  auto cost = [&](std::size_t i, std::size_t j) { return std::abs(a[i - 1] - b[j - 1]); };
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> match(n);
  for (std::size_t j = 1; j <= n; ++j) match[p[j] - 1] = j - 1;
  return match;
}

double multiset_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  const auto match = match_multisets(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < match.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[match[i]]));
  return worst;
}

}  // namespace rtrap
