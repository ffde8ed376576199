#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtrap/model.hpp"
#include "rtrap/tracker.hpp"

namespace rtrap {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;  // residual
  std::size_t points = 0;
};

/// Ordinary least squares over xs[i] in [lo, hi].
LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys, double lo, double hi);

struct CriticalEstimate {
  bool transition = false;
  std::string verdict;       // "transition" or "no-transition"
  double alphaCritHat = 0.0;  // maximum of B, parabola through the top grid point
  double changePoint = 0.0;   // largest slope jump of omega, local hinge fit on a sub-grid
  double hingeRms = 0.0;
  double spread = 0.0;        // |alphaCritHat - changePoint|, small means consistent
  double bPeak = 1.0;
};

struct CollisionEstimates {
  std::optional<double> alphaC1;
  std::optional<double> alphaC2;
};

struct SweepEstimates {
  CriticalEstimate critical;
  LinearFit slopeBelow;  // omega over alpha <= 0.5 changePoint
  LinearFit slopeAbove;  // omega over the upper half of the grid
  CollisionEstimates collisions;
};

struct SweepOptions {
  TrackOptions track;
};

struct SweepResult {
  TrajectorySet trajectories;
  std::vector<double> B;       // per grid point
  std::vector<double> npc;     // grid-major, states per row
  std::vector<double> normSq;  // grid-major
  std::vector<double> omega;   // Gamma_broad / (2M)
  std::size_t broadState = 0;  // model slot
  bool broadAmbiguous = false;
  SweepEstimates estimates;

  double npc_at(std::size_t g, std::size_t k) const { return npc[g * trajectories.states + k]; }
  double norm_at(std::size_t g, std::size_t k) const { return normSq[g * trajectories.states + k]; }
  std::vector<double> broad_npc() const;
  std::vector<double> broad_gamma_half() const;
};

SweepResult run_sweep(const ModelInstance& model, const std::vector<double>& alphaGrid, double phi,
                      const SweepOptions& options = {});

/// Independent sweeps spread over the worker threads.
std::vector<SweepResult> run_sweeps(const std::vector<ModelInstance>& models,
                                    const std::vector<double>& alphaGrid, double phi,
                                    const SweepOptions& options = {});

CriticalEstimate estimate_critical(const SweepResult& sweep);

/// alpha_c1: first pair landing on Re lambda = 0; alpha_c2: the next pair leaving it.
CollisionEstimates detect_collisions(const SweepResult& sweep);

/// Largest forward-difference slope of y over x.
double max_slope(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> linear_grid(double lo, double hi, std::size_t n);
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Geometric below 0.8 guess, linear with the given step up to 1.2 guess, geometric above.
std::vector<double> default_alpha_grid(double lo, double hi, double guess, double step = 0.005,
                                       std::size_t geometricPoints = 40);

}  // namespace rtrap
