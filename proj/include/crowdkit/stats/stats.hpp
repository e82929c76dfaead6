#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crowdkit/core/types.hpp"

namespace crowdkit {

struct SpeedDistribution {
    std::vector<std::pair<double, int>> bins;  // lower edge of each 0.1 m/s bin, count
    double mu = 0.0;                           // sample mean of per-trajectory mean speeds
    double sigma = 0.0;                        // sample standard deviation (n - 1)
    int count = 0;                             // trajectories
};

// Per-trajectory mean of the smoothed finite-difference speeds, binned at
// 0.1 m/s, with a moment-based Gaussian fit.
SpeedDistribution speed_distribution(const TrajectorySet& set);

// Two-column table (bin center, count) with the fit in header comments.
std::string speed_histogram_text(const SpeedDistribution& dist);

// An entry or exit line on the floor, given by its two endpoints.
struct GateLine {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;
};

// Time of the first crossing of the gate segment at or after t_min,
// interpolated linearly inside the crossing segment; NaN when the path never
// crosses.
double first_gate_crossing(const Trajectory& traj, const GateLine& gate, double t_min);

struct WalkingTimeCdf {
    std::vector<double> times;  // sorted walking times, seconds
    int excluded = 0;           // trajectories that never completed entry->exit
};

// Walking time = first exit crossing after the first entry crossing, per
// trajectory; incomplete traversals are excluded and counted.
WalkingTimeCdf walking_time_cdf(const TrajectorySet& set, const GateLine& entry,
                                const GateLine& exit);

// Two-column table (t_w, empirical CDF), one row per sample.
std::string cdf_table_text(const WalkingTimeCdf& cdf);

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 * sum_k (-1)^(k-1) exp(-2 k^2 lambda^2), clamped to [0, 1].
double kolmogorov_tail(double lambda);

struct KsResult {
    double d = 0.0;
    double p = 1.0;
    double n_effective = 0.0;
    bool small_sample = false;  // min(n_a, n_b) < 25: asymptotic p is rough
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value,
// lambda = sqrt(n_a n_b / (n_a + n_b)) * D.
KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace crowdkit
