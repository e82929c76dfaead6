#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crowdkit/core/types.hpp"

namespace crowdkit {

// Sensor near-limit below which depth readings are unusable. Only the far
// limit is a per-camera property; the near cutoff is a hardware floor.
inline constexpr double kMinValidDepth = 0.4;

struct CameraIntrinsics {
    double focal_length_px = 580.0;
    int width = 640;
    int height = 480;
    double depth_range_max = 4.0;  // meters

    void validate() const;
    double cx() const { return width / 2.0; }
    double cy() const { return height / 2.0; }
};

// One timestamped depth image from one sensor. Depth 0 marks invalid pixels.
struct DepthFrame {
    std::uint32_t sensor_id = 0;
    double t = 0.0;
    int width = 0;
    int height = 0;
    std::vector<float> depth;  // row-major, width*height

    float at(int u, int v) const { return depth[static_cast<std::size_t>(v) * width + u]; }
    float& at(int u, int v) { return depth[static_cast<std::size_t>(v) * width + u]; }
};

// Pinhole back-projection of all valid pixels into camera coordinates:
// x = (u - cx)·z/f, y = (v - cy)·z/f. Pixels outside (kMinValidDepth,
// depth_range_max] produce no point.
std::vector<Point3> back_project(const DepthFrame& frame, const CameraIntrinsics& intrinsics);

// Binary depth-frame format: magic "DPF1", sensor_id u32, t f64, width u32,
// height u32, then width*height f32 row-major, all little-endian.
DepthFrame read_depth_frame(const std::string& path);
void write_depth_frame(const std::string& path, const DepthFrame& frame);

}  // namespace crowdkit
