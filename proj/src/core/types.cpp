#include "crowdkit/core/types.hpp"

#include <stdexcept>
#include <utility>

namespace crowdkit {

Trajectory::Trajectory(std::string id, std::vector<TrajectoryPoint> points)
    : id_(std::move(id)), points_(std::move(points)), mean_height_(0.0) {
    if (points_.empty()) throw std::invalid_argument("trajectory '" + id_ + "' has no points");
    double sum_z = 0.0;
    double prev_t = -1.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.t) || p.t < 0.0)
            throw std::invalid_argument("trajectory '" + id_ + "': bad timestamp at index " +
                                        std::to_string(i));
        if (!p.position.finite())
            throw std::invalid_argument("trajectory '" + id_ + "': non-finite position at index " +
                                        std::to_string(i));
        if (i > 0 && p.t <= prev_t)
            throw std::invalid_argument("trajectory '" + id_ +
                                        "': timestamps not strictly increasing at index " +
                                        std::to_string(i));
        prev_t = p.t;
        sum_z += p.position.z;
    }
    mean_height_ = sum_z / static_cast<double>(points_.size());
}

TrajectorySet::TrajectorySet(double frame_rate) : frame_rate_(frame_rate) {
    if (!(frame_rate_ > 0.0)) throw std::invalid_argument("frame_rate must be positive");
}

TrajectorySet::TrajectorySet(std::vector<Trajectory> trajectories, double frame_rate)
    : TrajectorySet(frame_rate) {
    for (auto& t : trajectories) add(std::move(t));
}

void TrajectorySet::add(Trajectory traj) {
    if (contains(traj.id()))
        throw std::invalid_argument("duplicate trajectory id '" + traj.id() + "'");
    trajectories_.push_back(std::move(traj));
}

bool TrajectorySet::contains(const std::string& id) const {
    for (const auto& t : trajectories_)
        if (t.id() == id) return true;
    return false;
}

const Trajectory& TrajectorySet::by_id(const std::string& id) const {
    for (const auto& t : trajectories_)
        if (t.id() == id) return t;
    throw std::invalid_argument("no trajectory with id '" + id + "'");
}

namespace {

Point3 lerp(const TrajectoryPoint& a, const TrajectoryPoint& b, double t) {
    const double u = (t - a.t) / (b.t - a.t);
    return a.position + u * (b.position - a.position);
}

}  // namespace

Trajectory resample(const Trajectory& traj, double rate) {
    if (traj.size() < 2) throw std::invalid_argument("resample: need at least 2 points");
    if (!(rate > 0.0)) throw std::invalid_argument("resample: rate must be positive");

    const auto& pts = traj.points();
    const double t0 = pts.front().t;
    const double t1 = pts.back().t;
    const double period = 1.0 / rate;

    std::vector<double> times;
    const auto n_steps = static_cast<std::size_t>(std::floor((t1 - t0) * rate + 1e-9));
    times.reserve(n_steps + 2);
    for (std::size_t k = 0; k <= n_steps; ++k) times.push_back(t0 + static_cast<double>(k) * period);
    if (t1 - times.back() > 1e-9 * std::max(1.0, std::abs(t1)))
        times.push_back(t1);
    else
        times.back() = t1;  // snap onto the exact final timestamp

    std::vector<TrajectoryPoint> out;
    out.reserve(times.size());
    std::size_t seg = 0;
    for (double t : times) {
        while (seg + 2 < pts.size() && pts[seg + 1].t < t) ++seg;
        out.push_back({t, lerp(pts[seg], pts[seg + 1], t)});
    }
    out.front().position = pts.front().position;
    out.back().position = pts.back().position;
    return Trajectory(traj.id(), std::move(out));
}

}  // namespace crowdkit
