#pragma once

#include <string>
#include <vector>

#include "rtrap/sweep.hpp"

namespace rtrap {

/// 15 significant digits, locale independent.
std::string format_double(double v);

inline constexpr const char* kTrajectoryHeader = "alpha,state,re_lambda,im_lambda,gamma_half,npc,norm_sq";

std::string trajectories_csv(const ModelInstance& model, const SweepResult& sweep);

struct TrajectoryRow {
  double alpha;
  int state;
  double reLambda, imLambda, gammaHalf, npc, normSq;
};
/// Inverse of trajectories_csv; Validation error on a malformed line.
std::vector<TrajectoryRow> parse_trajectories_csv(const std::string& text);

/// Writes text to path; Validation error when the file cannot be opened.
void write_text(const std::string& path, const std::string& text);

}  // namespace rtrap
