#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace crowdkit {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(double s, const Point3& p) { return {s * p.x, s * p.y, s * p.z}; }

inline double norm(const Point3& p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }

inline double horizontal_distance(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

struct TrajectoryPoint {
    double t = 0.0;  // seconds relative to the dataset epoch
    Point3 position;
};

// Ordered, validated sequence of timestamped world positions for one
// pedestrian. Immutable after construction.
class Trajectory {
  public:
    Trajectory(std::string id, std::vector<TrajectoryPoint> points);

    const std::string& id() const { return id_; }
    const std::vector<TrajectoryPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const TrajectoryPoint& front() const { return points_.front(); }
    const TrajectoryPoint& back() const { return points_.back(); }
    double duration() const { return points_.back().t - points_.front().t; }

    // Arithmetic mean of point heights (z).
    double mean_height() const { return mean_height_; }

  private:
    std::string id_;
    std::vector<TrajectoryPoint> points_;
    double mean_height_;
};

// A collection of trajectories with unique ids, plus the nominal sampling
// rate of the producing sensor/pipeline.
class TrajectorySet {
  public:
    explicit TrajectorySet(double frame_rate = 30.0);
    TrajectorySet(std::vector<Trajectory> trajectories, double frame_rate = 30.0);

    void add(Trajectory traj);

    const std::vector<Trajectory>& trajectories() const { return trajectories_; }
    std::size_t size() const { return trajectories_.size(); }
    bool empty() const { return trajectories_.empty(); }
    const Trajectory& operator[](std::size_t i) const { return trajectories_[i]; }
    double frame_rate() const { return frame_rate_; }

    bool contains(const std::string& id) const;
    const Trajectory& by_id(const std::string& id) const;

  private:
    std::vector<Trajectory> trajectories_;
    double frame_rate_;
};

// Piecewise-linear resampling at uniform 1/rate intervals; endpoints are
// preserved exactly (the final timestamp is appended when the span is not an
// integer number of periods).
Trajectory resample(const Trajectory& traj, double rate);

}  // namespace crowdkit
