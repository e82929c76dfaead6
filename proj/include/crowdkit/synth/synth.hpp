#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crowdkit/core/types.hpp"
#include "crowdkit/detection/background.hpp"
#include "crowdkit/geometry/camera.hpp"
#include "crowdkit/geometry/rigid.hpp"

namespace crowdkit {

// A simulated pedestrian: a vertical capsule (cylindrical torso with
// hemispherical caps) of the given height and body diameter, sliding along a
// piecewise-linear floor path.
struct WalkerSpec {
    std::string id;
    double height = 1.7;  // m, floor to crown
    double width = 0.12;  // m, body diameter seen from above
    std::vector<TrajectoryPoint> waypoints;  // (t, x, y); z ignored

    void validate() const;
};

// Floor position at time t; false before the first or after the last
// waypoint.
bool walker_position(const WalkerSpec& walker, double t, double* x, double* y);

struct SensorSpec {
    std::uint32_t id = 0;
    RigidTransform pose;  // camera -> world
};

// Ceiling-mounted camera at (x, y, z) looking straight down, rotated by
// yaw_deg about the vertical. At zero yaw the image u-axis follows world x.
RigidTransform top_down_pose(double x, double y, double z, double yaw_deg);

struct SyntheticScene {
    std::vector<WalkerSpec> walkers;
    std::vector<SensorSpec> sensors;
    std::vector<BackgroundBox> walls;  // solid axis-aligned boxes
    CameraIntrinsics intrinsics;
    double frame_rate = 30.0;
    double duration = 10.0;   // s; frames at k / frame_rate for k < frame_count()
    double noise_sigma = 0.0; // m, Gaussian depth noise
    std::uint64_t seed = 1;

    void validate() const;
    int frame_count() const;
    double frame_time(int k) const { return static_cast<double>(k) / frame_rate; }
};

// Depth image of the static walls alone (no walkers, no noise); usable as a
// shared base for every frame of one sensor.
DepthFrame render_walls(const SyntheticScene& scene, std::size_t sensor_index);

// Full depth image at time t: walls and walkers composited by nearest
// surface, depth noise added, readings beyond the range zeroed. Passing a
// precomputed wall_base (from render_walls) skips re-rendering the statics;
// the output is identical either way.
DepthFrame render_depth(const SyntheticScene& scene, std::size_t sensor_index, double t,
                        const DepthFrame* wall_base = nullptr);

struct GroundTruth {
    TrajectorySet global{30.0};
    std::vector<TrajectorySet> per_sensor;  // fragments "<walker>@s<sensor>.<k>"
};

// Head (crown) trajectories sampled at the frame times: the full paths, plus
// per-sensor fragments clipped to the frames where the crown projects into
// the image within the valid depth range. Fragments shorter than 3 frames
// are dropped.
GroundTruth ground_truth(const SyntheticScene& scene);

// Background model covering the walls, inflated so that depth noise cannot
// push wall points outside of it.
BackgroundModel scene_background(const SyntheticScene& scene);

// Scene description text:
//   frame_rate = 30            duration = 10
//   noise_sigma = 0.01         seed = 1
//   focal_px = 580             width_px = 640
//   height_px = 480            depth_range_max = 4
//   sensor <id> <x> <y> <z> <yaw_deg>
//   wall <xmin> <ymin> <zmin> <xmax> <ymax> <zmax>
//   walker <id> <height> <width> <t> <x> <y> [<t> <x> <y> ...]
std::string scene_spec_text(const SyntheticScene& scene);
SyntheticScene scene_spec_from_lines(const std::vector<std::string>& lines);
SyntheticScene read_scene_spec(const std::string& path);
void write_scene_spec(const std::string& path, const SyntheticScene& scene);

// Three downward sensors at 4.5 m height spanning roughly six meters of a
// two-meter-wide walled corridor; no walkers.
SyntheticScene default_corridor_scene();

}  // namespace crowdkit
