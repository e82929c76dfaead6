#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crowdkit/core/types.hpp"

namespace crowdkit {

// Rotation (row-major 3x3) plus translation mapping sensor coordinates into
// the world frame: world = R * camera + t.
struct RigidTransform {
    std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};
    Point3 translation;

    // Throws unless the rotation is orthonormal with determinant +1 (1e-9).
    void validate() const;
    RigidTransform inverse() const;
};

struct PointMatch {
    Point3 world;
    Point3 camera;
};

Point3 apply_transform(const RigidTransform& tf, const Point3& p);
std::vector<Point3> apply_transform(const RigidTransform& tf, const std::vector<Point3>& pts);

// Closed-form least-squares rigid alignment (orthogonal Procrustes via SVD
// with reflection correction). Needs >= 3 non-collinear matches.
RigidTransform estimate_rigid_transform(const std::vector<PointMatch>& matches);

// sqrt(mean |world - (R*camera + t)|^2) over the matches.
double calibration_rmse(const RigidTransform& tf, const std::vector<PointMatch>& matches);

// Calibration file: one text record per sensor —
// sensor_id, 9 rotation entries row-major, 3 translation entries.
std::map<std::uint32_t, RigidTransform> read_calibration_file(const std::string& path);
void write_calibration_file(const std::string& path,
                            const std::map<std::uint32_t, RigidTransform>& calib);
std::string calibration_file_text(const std::map<std::uint32_t, RigidTransform>& calib);

}  // namespace crowdkit
