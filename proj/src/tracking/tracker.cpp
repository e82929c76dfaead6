#include "crowdkit/tracking/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace crowdkit {

void TrackerConfig::validate() const {
    if (history_n < 1) throw std::invalid_argument("history_n must be >= 1");
    if (!(gate_radius > 0.0)) throw std::invalid_argument("gate_radius must be positive");
    if (max_coast < 0) throw std::invalid_argument("max_coast must be >= 0");
    if (!(frame_rate > 0.0)) throw std::invalid_argument("frame_rate must be positive");
}

Point3 predict_position(const Track& track, double t_next, const TrackerConfig& cfg) {
    cfg.validate();
    if (track.trajectory.empty()) throw std::invalid_argument("predict_position: empty track");
    const auto& pts = track.trajectory;
    const auto n = pts.size();
    if (n == 1) return pts.back().position;

    const std::size_t window = std::min<std::size_t>(cfg.history_n, n);
    const TrajectoryPoint& first = pts[n - window];
    const TrajectoryPoint& last = pts[n - 1];
    const double span = last.t - first.t;
    const Point3 v = (1.0 / span) * (last.position - first.position);
    return last.position + (t_next - last.t) * v;
}

AssociationResult associate(std::vector<Track>& tracks, const std::vector<Detection>& detections,
                            double t, const TrackerConfig& cfg, int* next_track_serial,
                            const std::string& id_prefix) {
    cfg.validate();
    for (const auto& d : detections)
        if (std::abs(d.t - t) > 1e-9)
            throw std::invalid_argument("associate: detection timestamp differs from frame time");
    for (const auto& tr : tracks)
        if (tr.state == TrackState::active && !tr.trajectory.empty() &&
            tr.trajectory.back().t >= t - 1e-12)
            throw std::invalid_argument("associate: frame time does not advance past track history");

    struct Candidate {
        double dist;
        int track;
        int det;
    };
    std::vector<Candidate> candidates;
    std::vector<Point3> predictions(tracks.size());
    for (int i = 0; i < static_cast<int>(tracks.size()); ++i) {
        if (tracks[i].state != TrackState::active) continue;
        predictions[i] = predict_position(tracks[i], t, cfg);
        for (int j = 0; j < static_cast<int>(detections.size()); ++j) {
            const double dx = predictions[i].x - detections[j].position.x;
            const double dy = predictions[i].y - detections[j].position.y;
            const double dz = predictions[i].z - detections[j].position.z;
            const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (dist <= cfg.gate_radius) candidates.push_back({dist, i, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.track != b.track) return a.track < b.track;
        return a.det < b.det;
    });

    AssociationResult result;
    std::vector<bool> track_used(tracks.size(), false);
    std::vector<bool> det_used(detections.size(), false);
    for (const auto& c : candidates) {
        if (track_used[c.track] || det_used[c.det]) continue;
        track_used[c.track] = true;
        det_used[c.det] = true;
        tracks[c.track].trajectory.push_back({t, detections[c.det].position});
        tracks[c.track].frames_since_update = 0;
        result.matched.emplace_back(c.track, c.det);
    }

    for (int i = 0; i < static_cast<int>(tracks.size()); ++i) {
        if (tracks[i].state != TrackState::active || track_used[i]) continue;
        if (++tracks[i].frames_since_update > cfg.max_coast) {
            tracks[i].state = TrackState::closed;
            result.closed_track_indices.push_back(i);
        }
    }

    int serial_fallback = static_cast<int>(tracks.size());
    int& serial = next_track_serial ? *next_track_serial : serial_fallback;
    for (int j = 0; j < static_cast<int>(detections.size()); ++j) {
        if (det_used[j]) continue;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%04d", serial++);
        Track tr;
        tr.id = id_prefix + buf;
        tr.trajectory.push_back({t, detections[j].position});
        tracks.push_back(std::move(tr));
        result.new_track_indices.push_back(static_cast<int>(tracks.size()) - 1);
    }
    return result;
}

TrajectorySet track_sequence(const std::vector<DetectionFrame>& frames, const TrackerConfig& cfg,
                             const std::string& id_prefix) {
    cfg.validate();
    for (std::size_t i = 1; i < frames.size(); ++i)
        if (frames[i].t <= frames[i - 1].t)
            throw std::invalid_argument("track_sequence: frames not strictly time-ordered");

    std::vector<Track> tracks;
    int serial = 0;
    for (const auto& frame : frames) associate(tracks, frame.detections, frame.t, cfg, &serial, id_prefix);

    TrajectorySet out(cfg.frame_rate);
    for (auto& tr : tracks)
        if (tr.trajectory.size() >= 3) out.add(Trajectory(tr.id, std::move(tr.trajectory)));
    return out;
}

}  // namespace crowdkit
