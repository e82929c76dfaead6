#pragma once

#include <map>
#include <string>

#include "crowdkit/core/types.hpp"

namespace crowdkit {

// Trajectory text format: '#'-prefixed "key = value" metadata lines, then the
// header "trajectory_id,t_seconds,x_m,y_m,z_m", then one comma-separated
// record per point. Points of one trajectory may appear in any order; they
// are sorted by time on read. "frame_rate" metadata is honored if present.

struct TrajectoryFile {
    TrajectorySet set{30.0};
    std::map<std::string, std::string> metadata;
};

TrajectoryFile read_trajectory_file(const std::string& path);

void write_trajectory_file(const std::string& path, const TrajectorySet& set,
                           const std::map<std::string, std::string>& metadata = {});

std::string trajectory_file_text(const TrajectorySet& set,
                                 const std::map<std::string, std::string>& metadata = {});

}  // namespace crowdkit
