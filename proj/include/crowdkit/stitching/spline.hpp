#pragma once

#include "crowdkit/core/types.hpp"

namespace crowdkit {

// Least-squares cubic B-spline approximation of x(t) and y(t), evaluated on
// a uniform grid at output_rate. The basis size grows with the point count
// (one knot interval per points_per_knot input samples), which keeps the fit
// flexible enough to follow the path while averaging out measurement noise
// at the few-centimeter scale. Endpoints are weighted heavily so the smoothed
// trajectory starts and ends where the measured one does. z is replaced by
// the trajectory-mean height. Trajectories with fewer than 4 points are
// returned unsmoothed.
Trajectory smooth_spline(const Trajectory& traj, double output_rate, int points_per_knot = 8);

}  // namespace crowdkit
