#include "rtrap/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "rtrap/error.hpp"
#include "rtrap/kernels.hpp"
#include "rtrap/parallel.hpp"

namespace rtrap {

const char* to_string(CollisionKind k) {
  switch (k) {
    case CollisionKind::Merge: return "merge";
    case CollisionKind::AxisJoin: return "axis_join";
    case CollisionKind::AxisLeave: return "axis_leave";
  }
  return "?";
}

double seed_alpha_bound(const ModelInstance& model) {
  double maxW = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) maxW = std::max(maxW, model.weight(i));
  if (maxW == 0.0) return std::numeric_limits<double>::infinity();
  const double sp = model.size() > 1 ? model.min_spacing() : 1.0;
  return 0.1 * sp / maxW;
}

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr std::size_t kChunk = 64;

cplx kappa_of(double alpha, double tanPhi) { return {alpha, alpha * tanPhi}; }

// Continuation state over the coupled levels only.
class Continuation {
 public:
  Continuation(const CoupledLevels& levels, double tanPhi, double spacing, const TrackOptions& opt)
      : lv_(levels), tanPhi_(tanPhi), spacing_(spacing), opt_(opt) {}

  std::vector<cplx> roots;
  double alpha = 0.0;
  std::size_t substeps = 0;
  bool reseeded = false;

  void seed(double a) {
    const cplx k = kappa_of(a, tanPhi_);
    roots.resize(lv_.size());
    for (std::size_t i = 0; i < lv_.size(); ++i) {
      roots[i] = lv_.energies()[i] - kI * k * lv_.weights()[i];
    }
    alpha = a;
    if (!correct(k, roots, 200).converged) {
      throw Error(ErrorCode::Diverged, "seed roots did not converge at alpha = " + std::to_string(a));
    }
  }

  void advance(double target) {
    while (alpha < target) {
      step(target);
    }
  }

  // One accepted substep towards target.
  void step(double target) {
    const double minStep = 1e-10 * std::max(alpha, 1e-6);
    if (!(h_ > 0.0)) h_ = target - alpha;
    for (;;) {
      double h = std::min(h_, target - alpha);
      const bool last = h >= target - alpha;
      const double next = last ? target : alpha + h;
      h = next - alpha;
      const bool floor = h <= minStep;
      const bool soft = h <= 1e-6 * std::max(alpha, 1e-6);

      std::vector<cplx> pred = predict(next);
      std::vector<cplx> trial = pred;
      const cplx k = kappa_of(next, tanPhi_);
      const int cap = soft ? 200 : opt_.maxCorrectorIterations;
      Corrected c = correct(k, trial, cap);
      if (!c.converged) {
        // Past a double root the pair leaves at right angles to its approach.
        std::vector<cplx> turned = pred;
        if (rotate_closest_pair(turned)) {
          trial = turned;
          c = correct(k, trial, cap);
          if (c.converged) pred = std::move(turned);
        }
      }
      if (!c.converged && floor && !reseeded) {
        // Re-seed the broad root from its strong-coupling asymptote and retry once.
        trial = pred;
        reseed_broad(k, trial);
        c = correct(k, trial, 200);
        reseeded = c.converged;
      }
      bool ok = c.converged && consistent(pred, trial);
      if (!ok && floor) {
        if (!c.converged) {
          throw Error(ErrorCode::Diverged,
                      "corrector failed at alpha = " + std::to_string(next) + " at the minimum step");
        }
        ok = true;
      }
      if (ok) {
        roots = std::move(trial);
        alpha = next;
        ++substeps;
        h_ = std::max(2.0 * h, h_);
        return;
      }
      h_ = 0.5 * h;
    }
  }

 private:
  struct Corrected {
    bool converged;
    int iterations;
  };

  // Jacobi-style Ehrlich-Aberth iteration on p(lambda) = prod (E_k - lambda) F(lambda).
  Corrected correct(cplx k, std::vector<cplx>& z, int maxIter) const {
    const std::size_t n = z.size();
    if (n == 0) return {true, 0};
    const auto& kern = kernels::active();
    std::vector<double> re(n), im(n);
    std::vector<cplx> delta(n);
    std::vector<double> rel(n);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= maxIter; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        re[i] = z[i].real();
        im[i] = z[i].imag();
      }
      parallel_for(n, kChunk, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          cplx zi = z[i];
          cplx ld = lv_.log_derivative(k, zi);
          if (!std::isfinite(ld.real()) || !std::isfinite(ld.imag())) {
            zi += cplx(0.0, -1e-9 * spacing_);
            ld = lv_.log_derivative(k, zi);
          }
          const cplx nr = 1.0 / ld;
          const cplx rep = kern.repulsion(re.data(), im.data(), n, i, zi);
          const cplx d = (z[i] - zi) + nr / (1.0 - nr * rep);
          delta[i] = std::isfinite(d.real()) && std::isfinite(d.imag()) ? d : cplx(0.0);
          rel[i] = std::abs(delta[i]) / std::max(std::abs(zi), spacing_);
        }
      });
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        z[i] -= delta[i];
        worst = std::max(worst, rel[i]);
      }
      if (worst <= opt_.tolerance * 10.0) return {true, it};
      // Near a double root the corrections bottom out at the rounding floor.
      if (it >= 3 && worst < 1e-7 && worst > 0.5 * prev) return {true, it};
      prev = worst;
    }
    return {false, maxIter};
  }

  // Euler step of dlambda/dalpha = i / (alpha kappa S'(lambda)); pairs about to
  // meet are moved with the local double-root law (lambda - c)^2 linear in alpha.
  std::vector<cplx> predict(double next) const {
    const std::size_t n = roots.size();
    const double h = next - alpha;
    const cplx k = kappa_of(alpha, tanPhi_);
    const auto& kern = kernels::active();
    std::vector<cplx> d(n);
    parallel_for(n, kChunk, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const auto s = kern.resolvent(lv_.energies().data(), lv_.weights().data(), n, roots[i]);
        d[i] = kI / (alpha * k * s.weightedSq);
      }
    });
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = roots[i] + h * d[i];

    const std::vector<std::size_t> nn = nearest(roots);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = nn[i];
      if (j <= i || j >= n || nn[j] != i) continue;
      const cplx half = 0.5 * (roots[i] - roots[j]);
      const cplx rel = h * (d[i] - d[j]);
      const bool finite = std::isfinite(std::abs(rel));
      if (finite && std::abs(rel) <= std::abs(half)) continue;
      const cplx c = 0.5 * (roots[i] + roots[j]) + (finite ? 0.5 * h * (d[i] + d[j]) : cplx(0.0));
      cplx s2 = half * half + half * rel;
      if (!finite) s2 = half * half;
      cplx s = std::sqrt(s2);
      if (std::abs(-s - half) < std::abs(s - half)) s = -s;
      out[i] = c + s;
      out[j] = c - s;
    }
    return out;
  }

  static bool rotate_closest_pair(std::vector<cplx>& z) {
    if (z.size() < 2) return false;
    const std::vector<std::size_t> nn = nearest(z);
    std::size_t a = z.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double d = std::abs(z[i] - z[nn[i]]);
      if (d < best) {
        best = d;
        a = i;
      }
    }
    const std::size_t b = nn[a];
    const cplx c = 0.5 * (z[a] + z[b]);
    const cplx s = 0.5 * (z[a] - z[b]) * kI;
    z[a] = c + s;
    z[b] = c - s;
    return true;
  }

  void reseed_broad(cplx k, std::vector<cplx>& z) const {
    if (z.empty()) return;
    std::size_t b = 0;
    for (std::size_t i = 1; i < z.size(); ++i) {
      if (z[i].imag() < z[b].imag()) b = i;
    }
    double ew = 0.0;
    for (std::size_t i = 0; i < lv_.size(); ++i) ew += lv_.energies()[i] * lv_.weights()[i];
    z[b] = ew / lv_.total_weight() - kI * k * lv_.total_weight();
  }

  // Every corrected root must stay well inside its own predicted neighbourhood.
  bool consistent(const std::vector<cplx>& pred, const std::vector<cplx>& corr) const {
    const std::size_t n = pred.size();
    if (n < 2) return true;
    const std::vector<double> dist = nearest_distance(pred);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(corr[i] - pred[i]) > 0.25 * dist[i]) return false;
    }
    return true;
  }

  static std::vector<std::size_t> nearest(const std::vector<cplx>& z) {
    const std::size_t n = z.size();
    std::vector<std::size_t> out(n, n);
    parallel_for(n, kChunk, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double dr = z[i].real() - z[j].real();
          const double di = z[i].imag() - z[j].imag();
          const double d2 = dr * dr + di * di;
          if (d2 < best) {
            best = d2;
            out[i] = j;
          }
        }
      }
    });
    return out;
  }

  static std::vector<double> nearest_distance(const std::vector<cplx>& z) {
    const std::vector<std::size_t> nn = nearest(z);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::abs(z[i] - z[nn[i]]);
    return out;
  }

  const CoupledLevels& lv_;
  double tanPhi_;
  double spacing_;
  TrackOptions opt_;
  double h_ = 0.0;
};

std::vector<std::size_t> on_axis(const std::vector<cplx>& z, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::abs(z[i].real()) < tol) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> minus(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

TrajectorySet track_trajectories(const ModelInstance& model, const std::vector<double>& alphaGrid,
                                 double phi, const TrackOptions& options) {
  if (alphaGrid.empty()) throw Error(ErrorCode::Validation, "empty alpha grid");
  for (std::size_t g = 0; g < alphaGrid.size(); ++g) {
    if (!std::isfinite(alphaGrid[g]) || alphaGrid[g] < 0.0) {
      throw Error(ErrorCode::Validation, "alpha grid values must be finite and >= 0");
    }
    if (g > 0 && alphaGrid[g] <= alphaGrid[g - 1]) {
      throw Error(ErrorCode::Validation, "alpha grid must be strictly increasing");
    }
  }
  if (!std::isfinite(phi) || std::abs(phi) >= 0.5 * std::numbers::pi) {
    throw Error(ErrorCode::Validation, "coupling phase must lie in (-90, 90) degrees");
  }

  const std::size_t m = model.size();
  const CoupledLevels levels(model);
  const std::size_t mc = levels.size();
  const double spacing = m > 1 ? model.mean_spacing() : 1.0;
  const double tanPhi = std::tan(phi);
  const bool axisEvents = options.detectAxisEvents && model.mirrorSymmetric && phi == 0.0;
  const double axisTol = options.axisTolerance * spacing;

  TrajectorySet out;
  out.alphaGrid = alphaGrid;
  out.phi = phi;
  out.states = m;
  out.firstIndex = model.firstIndex;
  out.lambdas.assign(alphaGrid.size() * m, cplx(0.0));

  Continuation cont(levels, tanPhi, spacing, options);
  bool started = false;

  auto emit = [&](std::size_t g, const std::vector<cplx>* z) {
    for (std::size_t s = 0; s < m; ++s) out.lambdas[g * m + s] = model.energies[s];
    if (!z) return;
    for (std::size_t i = 0; i < mc; ++i) out.lambdas[g * m + levels.slot(i)] = (*z)[i];
  };

  auto index_of = [&](std::size_t i) { return model.index_of(levels.slot(i)); };

  auto axis_step = [&](double target) {
    const std::vector<cplx> before = cont.roots;
    const double a0 = cont.alpha;
    cont.step(target);
    if (!axisEvents) return;
    const auto axis0 = on_axis(before, axisTol);
    const auto axis1 = on_axis(cont.roots, axisTol);
    if (axis0.size() == axis1.size()) return;

    // Refine the crossing by bisection, re-running the continuation from a0.
    double lo = a0, hi = cont.alpha;
    for (int it = 0; it < 48 && hi - lo > 1e-13 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      Continuation probe(levels, tanPhi, spacing, options);
      probe.roots = before;
      probe.alpha = a0;
      probe.advance(mid);
      if (on_axis(probe.roots, axisTol).size() == axis0.size()) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double at = 0.5 * (lo + hi);
    const bool join = axis1.size() > axis0.size();
    std::vector<std::size_t> changed = join ? minus(axis1, axis0) : minus(axis0, axis1);
    if (changed.empty()) return;
    std::sort(changed.begin(), changed.end(), [&](std::size_t a, std::size_t b) {
      const int ia = std::abs(index_of(a)), ib = std::abs(index_of(b));
      return ia != ib ? ia < ib : index_of(a) < index_of(b);
    });
    const std::size_t a = changed[0];
    const std::size_t b = changed.size() > 1 ? changed[1] : changed[0];
    if (a != b) {
      auto& z = cont.roots;
      if (join) {
        // Label nearer the centre keeps the wider root.
        if (z[b].imag() < z[a].imag()) std::swap(z[a], z[b]);
      } else {
        // Lower label goes left.
        const std::size_t lowL = index_of(a) < index_of(b) ? a : b;
        const std::size_t highL = lowL == a ? b : a;
        if (z[lowL].real() > z[highL].real()) std::swap(z[lowL], z[highL]);
      }
    }
    out.collisions.push_back({at, levels.slot(a), levels.slot(b),
                              join ? CollisionKind::AxisJoin : CollisionKind::AxisLeave});
  };

  for (std::size_t g = 0; g < alphaGrid.size(); ++g) {
    const double target = alphaGrid[g];
    if (target == 0.0 || mc == 0) {
      emit(g, nullptr);
      continue;
    }
    if (!started) {
      cont.seed(std::min(target, 0.1 * seed_alpha_bound(model)));
      started = true;
    }
    while (cont.alpha < target) axis_step(target);
    emit(g, &cont.roots);

    const auto& z = cont.roots;
    double traceErr = 0.0, scale = 0.0;
    cplx sum = 0.0;
    for (std::size_t i = 0; i < mc; ++i) {
      sum += z[i] - levels.energies()[i];
      scale += std::abs(z[i]);
    }
    traceErr = std::abs(sum + kI * kappa_of(target, tanPhi) * levels.total_weight());
    if (traceErr > 1e-6 * std::max(scale, 1.0)) {
      std::size_t pa = 0, pb = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < mc; ++i) {
        for (std::size_t j = i + 1; j < mc; ++j) {
          const double d = std::abs(z[i] - z[j]);
          if (d < best) {
            best = d;
            pa = i;
            pb = j;
          }
        }
      }
      throw Error(ErrorCode::LostRoot, "root lost at alpha = " + std::to_string(target) +
                                           " near labels " + std::to_string(index_of(pa)) + " and " +
                                           std::to_string(index_of(pb)));
    }

    const double mergeTol = options.collisionTolerance * spacing;
    for (std::size_t i = 0; i < mc; ++i) {
      for (std::size_t j = i + 1; j < mc; ++j) {
        if (std::abs(z[i] - z[j]) < mergeTol) {
          out.collisions.push_back({target, levels.slot(i), levels.slot(j), CollisionKind::Merge});
        }
      }
    }
  }
  out.substeps = cont.substeps;
  out.broadReseeded = cont.reseeded;
  return out;
}

std::vector<cplx> solve_at(const ModelInstance& model, const CouplingParam& kappa) {
  if (kappa.alpha < 0.0) throw Error(ErrorCode::Validation, "alpha must be >= 0");
  if (kappa.alpha == 0.0 && kappa.beta != 0.0) {
    throw Error(ErrorCode::Validation, "purely imaginary coupling is not on a tracked ray");
  }
  TrackOptions opt;
  opt.detectAxisEvents = false;
  const auto t = track_trajectories(model, {kappa.alpha}, kappa.phi(), opt);
  return {t.lambdas.begin(), t.lambdas.end()};
}

}  // namespace rtrap
