#pragma once

#include <string>
#include <vector>

#include "crowdkit/core/types.hpp"
#include "crowdkit/detection/detect.hpp"

namespace crowdkit {

struct TrackerConfig {
    int history_n = 5;         // frames used for the velocity estimate
    double gate_radius = 0.5;  // meters; association gate
    int max_coast = 5;         // frames a track survives without a detection
    double frame_rate = 30.0;

    void validate() const;
};

enum class TrackState { active, closed };

struct Track {
    std::string id;
    std::vector<TrajectoryPoint> trajectory;
    int frames_since_update = 0;
    TrackState state = TrackState::active;
};

// Linear extrapolation: last position plus the mean velocity over the last
// history_n points times the lead time. A single-point track predicts itself.
Point3 predict_position(const Track& track, double t_next, const TrackerConfig& cfg);

struct AssociationResult {
    // (track index, detection index) pairs accepted this frame.
    std::vector<std::pair<int, int>> matched;
    std::vector<int> new_track_indices;   // tracks opened for unmatched detections
    std::vector<int> closed_track_indices;
};

// Globally-nearest-first greedy gated matching of predictions to detections
// at time t. Matched tracks append the detection; unmatched detections open
// new tracks; unmatched active tracks coast and close after max_coast frames.
AssociationResult associate(std::vector<Track>& tracks, const std::vector<Detection>& detections,
                            double t, const TrackerConfig& cfg, int* next_track_serial = nullptr,
                            const std::string& id_prefix = "t");

struct DetectionFrame {
    double t = 0.0;
    std::vector<Detection> detections;
};

// Fold of associate over time-ordered frames; emits every track with at
// least 3 points as a trajectory.
TrajectorySet track_sequence(const std::vector<DetectionFrame>& frames, const TrackerConfig& cfg,
                             const std::string& id_prefix = "t");

}  // namespace crowdkit
