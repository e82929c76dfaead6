#pragma once

// Small builders shared by the test suites.

#include <array>
#include <string>
#include <vector>

#include "crowdkit/common/rng.hpp"
#include "crowdkit/core/types.hpp"

namespace testutil {

// Trajectory from flat (t, x, y, z) quadruples.
inline crowdkit::Trajectory traj(const std::string& id,
                                 const std::vector<std::array<double, 4>>& rows) {
    std::vector<crowdkit::TrajectoryPoint> pts;
    for (const auto& r : rows) pts.push_back({r[0], {r[1], r[2], r[3]}});
    return crowdkit::Trajectory(id, std::move(pts));
}

// Uniform straight-line walk sampled at `rate`, constant height.
inline crowdkit::Trajectory line_walk(const std::string& id, double x0, double y0, double vx,
                                      double vy, double t0, double t1, double rate,
                                      double z = 1.7) {
    std::vector<crowdkit::TrajectoryPoint> pts;
    const int n = static_cast<int>((t1 - t0) * rate) + 1;
    for (int k = 0; k < n; ++k) {
        const double t = t0 + k / rate;
        pts.push_back({t, {x0 + vx * (t - t0), y0 + vy * (t - t0), z}});
    }
    return crowdkit::Trajectory(id, std::move(pts));
}

inline std::vector<crowdkit::Point3> random_points(crowdkit::Rng& rng, int n, double lo,
                                                   double hi) {
    std::vector<crowdkit::Point3> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        pts.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)});
    return pts;
}

inline crowdkit::Trajectory random_traj(crowdkit::Rng& rng, const std::string& id, int n,
                                        double spread = 3.0) {
    std::vector<crowdkit::TrajectoryPoint> pts;
    for (int k = 0; k < n; ++k)
        pts.push_back({k / 30.0,
                       {rng.uniform(-spread, spread), rng.uniform(-spread, spread),
                        rng.uniform(1.5, 2.0)}});
    return crowdkit::Trajectory(id, std::move(pts));
}

}  // namespace testutil
