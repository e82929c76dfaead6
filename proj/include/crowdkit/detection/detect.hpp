#pragma once

#include <cstdint>
#include <vector>

#include "crowdkit/core/types.hpp"
#include "crowdkit/detection/background.hpp"

namespace crowdkit {

struct DetectionConfig {
    double cutoff_low = 1.5;        // meters; below a typical upper-body region
    double cutoff_high = 2.1;       // meters; above a tall person
    int sample_size = 500;          // R, clustering subsample size
    double linkage_threshold = 0.6; // meters; typical human shoulder width
    int min_cluster_points = 15;    // clusters below this are noise
    double max_center_distance = 0.45;  // meters; reassignment radius

    void validate() const;
};

struct Detection {
    Point3 position;  // cluster representative (95th-percentile-height member)
    double t = 0.0;
    int point_count = 0;
    std::uint32_t sensor_id = 0;
};

// Points not contained in any background box.
std::vector<Point3> subtract_background(const std::vector<Point3>& points,
                                        const BackgroundModel& bg);

// Points with cutoff_low <= z <= cutoff_high (the upper-body band).
std::vector<Point3> height_cutoff(const std::vector<Point3>& points, const DetectionConfig& cfg);

// Complete-linkage agglomerative clustering cut at linkage_threshold, run on
// a seeded uniform subsample of min(sample_size, n) points. Points are put
// into a canonical order (lexicographic by x, y, z) before sampling, so the
// result is invariant under input permutation for a fixed seed. Returns
// groups of indices into `points` (sampled indices only).
std::vector<std::vector<int>> complete_linkage_cluster(const std::vector<Point3>& points,
                                                       const DetectionConfig& cfg,
                                                       std::uint64_t seed);

// Re-assign every point to its nearest cluster centroid (horizontal distance,
// people being vertical structures) if within max_center_distance, then drop
// clusters with fewer than min_cluster_points members.
std::vector<std::vector<int>> assign_and_cleanup(const std::vector<Point3>& all_points,
                                                 const std::vector<std::vector<int>>& clusters,
                                                 const DetectionConfig& cfg);

// The member point at the 95th percentile of cluster heights (nearest-rank;
// stable under ties) becomes the detection position.
Detection cluster_representative(const std::vector<Point3>& cluster_points, double t,
                                 std::uint32_t sensor_id);

// Full per-frame pipeline: background subtraction, height cutoff, clustering
// on a subsample, reassignment/cleanup, representative extraction.
std::vector<Detection> detect_frame(const std::vector<Point3>& points, double t,
                                    std::uint32_t sensor_id, const BackgroundModel& bg,
                                    const DetectionConfig& cfg, std::uint64_t seed);

}  // namespace crowdkit
