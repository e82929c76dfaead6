#pragma once

#include <vector>

#include "crowdkit/core/types.hpp"

namespace crowdkit {

// Horizontal speed magnitudes from finite differences at the native rate,
// smoothed by a centered moving average over `window` samples (clipped at the
// ends). Differentiating discrete positions is noisy, hence the smoothing.
// Returns size()-1 values for a trajectory of size() points.
std::vector<double> smoothed_speeds(const Trajectory& traj, int window = 5);

// Nearest-rank percentile: for pct in (0, 100], the value at 0-based index
// ceil(pct/100 * n) - 1 of the sorted sample.
double percentile_nearest_rank(std::vector<double> values, double pct);

}  // namespace crowdkit
