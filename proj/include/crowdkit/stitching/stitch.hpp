#pragma once

#include <string>
#include <vector>

#include "crowdkit/core/types.hpp"

namespace crowdkit {

struct StitchConfig {
    double h_start = 3.0;  // threshold schedule in the mixed seconds/meters scale
    double h_step = 3.0;
    double h_max = 23.0;
    bool smoothing_enabled = true;
    double output_rate = 30.0;
    double seam_overlap_max = 1.0;  // seconds two fragments may overlap at a seam
    int spline_points_per_knot = 8;

    void validate() const;
    // h_start, h_start+h_step, ... (< h_max), then exactly h_max.
    std::vector<double> schedule() const;
};

// Endpoint descriptor [t, x, y, z̄]; seconds and meters are deliberately
// mixed unnormalized — they are already on comparable scales.
struct EndpointFeature {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double zbar = 0.0;
};

EndpointFeature start_feature(const Trajectory& traj);
EndpointFeature end_feature(const Trajectory& traj);

double endpoint_distance(const EndpointFeature& a_end, const EndpointFeature& b_start);

// Cost matrix between trajectory ends and starts, padded to square with the
// null-match value d0 = (max real entry) + 1.
struct DistanceMatrix {
    std::vector<std::vector<double>> cost;  // square, n x n
    int n_ending = 0;
    int n_starting = 0;
    double d0 = 0.0;
};

DistanceMatrix build_distance_matrix(const std::vector<Trajectory>& ending,
                                     const std::vector<Trajectory>& starting);

struct MatchRecord {
    std::string id_a;  // fragment contributing its end
    std::string id_b;  // fragment contributing its start
    double cost = 0.0;
    double round_h = 0.0;
    bool accepted = false;
};

struct MatchReport {
    std::vector<MatchRecord> records;

    std::vector<MatchRecord> accepted() const;
};

std::string match_report_text(const MatchReport& report);
void write_match_report(const std::string& path, const MatchReport& report);
MatchReport read_match_report(const std::string& path);

struct StitchResult {
    TrajectorySet merged{30.0};
    MatchReport report;
};

// Iterative cross-sensor stitching: for each threshold h in the schedule and
// each direction (a-ends vs b-starts, then b-ends vs a-starts), restrict the
// endpoint-distance matrix to unassigned fragments with at least one entry
// below h, solve the assignment, and accept non-null pairs with cost < h.
// Accepted chains are concatenated in time order (near-duplicate timestamps
// at the seam averaged) and smoothed when smoothing is enabled; everything
// else passes through unchanged.
StitchResult iterative_stitch(const TrajectorySet& set_a, const TrajectorySet& set_b,
                              const StitchConfig& cfg);

}  // namespace crowdkit
