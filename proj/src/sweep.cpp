#include "rtrap/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rtrap/eigens.hpp"
#include "rtrap/error.hpp"
#include "rtrap/parallel.hpp"

namespace rtrap {

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < lo || xs[i] > hi) continue;
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    ++n;
  }
  LinearFit f;
  f.points = n;
  if (n < 2) return f;
  const double dn = static_cast<double>(n);
  const double det = dn * sxx - sx * sx;
  if (det == 0.0) return f;
  f.slope = (dn * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / dn;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < lo || xs[i] > hi) continue;
    const double r = ys[i] - f.intercept - f.slope * xs[i];
    rss += r * r;
  }
  f.rms = std::sqrt(rss / dn);
  return f;
}

std::vector<double> SweepResult::broad_npc() const {
  std::vector<double> out(trajectories.grid_size());
  for (std::size_t g = 0; g < out.size(); ++g) out[g] = npc_at(g, broadState);
  return out;
}

std::vector<double> SweepResult::broad_gamma_half() const {
  std::vector<double> out(trajectories.grid_size());
  for (std::size_t g = 0; g < out.size(); ++g) out[g] = -trajectories.at(g, broadState).imag();
  return out;
}

namespace {

// Fits y = a + b x + d max(x - c, 0) by least squares; returns d and the rms.
bool hinge_fit(const std::vector<double>& x, const std::vector<double>& y, double c, double h,
               double& jump, double& rms) {
  double m[3][3] = {}, r[3] = {};
  std::size_t n = 0, left = 0, right = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - c) > h) continue;
    const double f[3] = {1.0, x[i] - c, std::max(x[i] - c, 0.0)};
    for (int a = 0; a < 3; ++a) {
      r[a] += f[a] * y[i];
      for (int b = 0; b < 3; ++b) m[a][b] += f[a] * f[b];
    }
    ++n;
    if (x[i] < c) ++left;
    if (x[i] > c) ++right;
  }
  if (left < 2 || right < 2) return false;
  // Cramer's rule on the 3x3 normal equations.
  auto det3 = [](double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double d = det3(m);
  if (d == 0.0) return false;
  double sol[3];
  for (int k = 0; k < 3; ++k) {
    double t[3][3];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) t[a][b] = b == k ? r[a] : m[a][b];
    sol[k] = det3(t) / d;
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - c) > h) continue;
    const double e = y[i] - sol[0] - sol[1] * (x[i] - c) - sol[2] * std::max(x[i] - c, 0.0);
    rss += e * e;
  }
  jump = sol[2];
  rms = std::sqrt(rss / static_cast<double>(n));
  return true;
}

// Vertex of the parabola through three points, kept inside [x0, x2].
double parabola_vertex(double x0, double x1, double x2, double y0, double y1, double y2) {
  const double den = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
  const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den;
  if (!(a < 0.0)) return x1;
  return std::clamp(-b / (2.0 * a), x0, x2);
}

}  // namespace

CriticalEstimate estimate_critical(const SweepResult& sweep) {
  CriticalEstimate e;
  const auto& a = sweep.trajectories.alphaGrid;
  const std::size_t n = a.size();
  if (n < 3) throw Error(ErrorCode::Validation, "need at least 3 grid points");

  const std::size_t peak = static_cast<std::size_t>(
      std::max_element(sweep.B.begin(), sweep.B.end()) - sweep.B.begin());
  e.bPeak = sweep.B[peak];

  const double h = 0.03 * (a.back() - a.front());
  double best = -std::numeric_limits<double>::infinity();
  constexpr int kSub = 8;  // hinge positions tried per grid interval
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (int j = 0; j < kSub; ++j) {
      const double c = a[i] + (a[i + 1] - a[i]) * j / kSub;
      double jump = 0.0, rms = 0.0;
      if (!hinge_fit(a, sweep.omega, c, h, jump, rms)) continue;
      if (jump > best) {
        best = jump;
        e.changePoint = c;
        e.hingeRms = rms;
      }
    }
  }

  if (peak == 0 || peak + 1 == n) {
    e.transition = false;
    e.verdict = "no-transition";
    return e;
  }
  e.transition = true;
  e.verdict = "transition";
  e.alphaCritHat = parabola_vertex(a[peak - 1], a[peak], a[peak + 1], sweep.B[peak - 1], sweep.B[peak],
                                   sweep.B[peak + 1]);
  e.spread = std::abs(e.alphaCritHat - e.changePoint);
  return e;
}

CollisionEstimates detect_collisions(const SweepResult& sweep) {
  CollisionEstimates c;
  const auto& ev = sweep.trajectories.collisions;
  for (const auto& x : ev) {
    if (x.kind == CollisionKind::AxisJoin) {
      c.alphaC1 = x.alpha;
      break;
    }
  }
  if (c.alphaC1) {
    for (const auto& x : ev) {
      if (x.kind == CollisionKind::AxisLeave && x.alpha > *c.alphaC1) {
        c.alphaC2 = x.alpha;
        break;
      }
    }
  }
  return c;
}

SweepResult run_sweep(const ModelInstance& model, const std::vector<double>& alphaGrid, double phi,
                      const SweepOptions& options) {
  SweepResult r;
  r.trajectories = track_trajectories(model, alphaGrid, phi, options.track);
  const auto& t = r.trajectories;
  const std::size_t m = t.states, ng = t.grid_size();
  if (m == 0) throw Error(ErrorCode::Validation, "empty model");

  r.B.assign(ng, 1.0);
  r.npc.assign(ng * m, 0.0);
  r.normSq.assign(ng * m, 1.0);
  const double tanPhi = std::tan(phi);
  parallel_for(ng, 1, [&](std::size_t b, std::size_t e) {
    for (std::size_t g = b; g < e; ++g) {
      const CouplingParam kp{alphaGrid[g], alphaGrid[g] * tanPhi};
      double sum = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const EigenSolution s = eigen_metrics(model, kp, t.at(g, k));
        r.npc[g * m + k] = s.npc;
        r.normSq[g * m + k] = s.normSq;
        sum += s.normSq;
      }
      r.B[g] = sum / static_cast<double>(m);
    }
  });

  // Broad state: widest at the last grid point; labels carry it back.
  std::size_t best = 0;
  double w1 = -1.0, w2 = -1.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double w = -t.at(ng - 1, k).imag();
    if (w > w1) {
      w2 = w1;
      w1 = w;
      best = k;
    } else if (w > w2) {
      w2 = w;
    }
  }
  r.broadState = best;
  r.broadAmbiguous = m > 1 && w1 > 0.0 && (w1 - w2) <= 0.01 * w1;

  r.omega.resize(ng);
  for (std::size_t g = 0; g < ng; ++g) r.omega[g] = -t.at(g, best).imag() / static_cast<double>(m);

  auto& est = r.estimates;
  if (ng >= 3) {
    est.critical = estimate_critical(r);
    const double cp = est.critical.changePoint;
    est.slopeBelow = fit_line(alphaGrid, r.omega, alphaGrid.front(), 0.5 * cp);
    est.slopeAbove = fit_line(alphaGrid, r.omega, 0.5 * (alphaGrid.front() + alphaGrid.back()),
                              alphaGrid.back());
  }
  est.collisions = detect_collisions(r);
  return r;
}

std::vector<SweepResult> run_sweeps(const std::vector<ModelInstance>& models,
                                    const std::vector<double>& alphaGrid, double phi,
                                    const SweepOptions& options) {
  std::vector<SweepResult> out(models.size());
  parallel_for(models.size(), 1, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = run_sweep(models[i], alphaGrid, phi, options);
  });
  return out;
}

double max_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < x.size() && i + 1 < y.size(); ++i) {
    best = std::max(best, (y[i + 1] - y[i]) / (x[i + 1] - x[i]));
  }
  return best;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw Error(ErrorCode::Validation, "grid needs n >= 2 and hi > lo");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  g.back() = hi;
  return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorCode::Validation, "log grid needs n >= 2 and 0 < lo < hi");
  }
  std::vector<double> g(n);
  const double r = std::log(hi / lo);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(r * static_cast<double>(i) / (n - 1));
  g.back() = hi;
  return g;
}

std::vector<double> default_alpha_grid(double lo, double hi, double guess, double step,
                                       std::size_t geometricPoints) {
  if (!(lo > 0.0) || !(hi > lo) || !(step > 0.0)) throw Error(ErrorCode::Validation, "bad grid range");
  const double a = std::clamp(0.8 * guess, lo, hi);
  const double b = std::clamp(1.2 * guess, lo, hi);
  std::vector<double> g;
  if (a > lo) {
    auto p = log_grid(lo, a, std::max<std::size_t>(geometricPoints, 2));
    g.insert(g.end(), p.begin(), p.end() - 1);
  }
  for (std::size_t k = 0; a + static_cast<double>(k) * step < b - 0.5 * step; ++k) {
    g.push_back(a + static_cast<double>(k) * step);
  }
  if (b < hi) {
    auto p = log_grid(b, hi, std::max<std::size_t>(geometricPoints, 2));
    g.insert(g.end(), p.begin(), p.end());
  } else {
    g.push_back(hi);
  }
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace rtrap
