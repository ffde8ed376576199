#pragma once

#include <cstddef>
#include <vector>

#include "rtrap/model.hpp"
#include "rtrap/secular.hpp"

namespace rtrap {

enum class CollisionKind {
  Merge,      // two roots closer than the collision tolerance at a grid point
  AxisJoin,   // mirror pair lands on Re lambda = 0 (symmetric models, real kappa)
  AxisLeave,  // two roots leave Re lambda = 0
};
const char* to_string(CollisionKind k);

struct CollisionEvent {
  double alpha;
  std::size_t first;  // model slots
  std::size_t second;
  CollisionKind kind;
};

struct TrackOptions {
  int maxCorrectorIterations = 8;
  double collisionTolerance = 1e-6;  // times mean spacing
  double axisTolerance = 1e-6;       // times mean spacing
  double tolerance = 1e-13;          // corrector stop, relative to max(|lambda|, spacing)
  bool detectAxisEvents = true;
};

/// lambda_k(alpha) on the grid for every model slot, with kappa = alpha (1 + i tan phi).
struct TrajectorySet {
  std::vector<double> alphaGrid;
  double phi = 0.0;
  std::size_t states = 0;
  int firstIndex = 0;
  std::vector<cplx> lambdas;  // grid-major: lambdas[g * states + k]
  std::vector<CollisionEvent> collisions;
  std::size_t substeps = 0;
  bool broadReseeded = false;

  cplx at(std::size_t g, std::size_t k) const { return lambdas[g * states + k]; }
  std::size_t grid_size() const { return alphaGrid.size(); }
};

/// Largest alpha at which lambda_k = E_k - i kappa w_k seeds are used directly.
double seed_alpha_bound(const ModelInstance& model);

TrajectorySet track_trajectories(const ModelInstance& model, const std::vector<double>& alphaGrid,
                                 double phi, const TrackOptions& options = {});

/// All eigenvalues at one coupling, by continuation from the small-alpha seeds.
std::vector<cplx> solve_at(const ModelInstance& model, const CouplingParam& kappa);

}  // namespace rtrap
