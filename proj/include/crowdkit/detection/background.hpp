#pragma once

#include <string>
#include <vector>

#include "crowdkit/core/types.hpp"

namespace crowdkit {

// Handcrafted static background: axis-aligned boxes in world coordinates
// marking walls, display cases and other known structure.
struct BackgroundBox {
    Point3 min;
    Point3 max;

    bool contains(const Point3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
               p.z <= max.z;
    }
};

struct BackgroundModel {
    std::vector<BackgroundBox> boxes;

    bool contains(const Point3& p) const {
        for (const auto& b : boxes)
            if (b.contains(p)) return true;
        return false;
    }
};

// Background file: one box per line, "xmin ymin zmin xmax ymax zmax" (meters).
BackgroundModel read_background_file(const std::string& path);
void write_background_file(const std::string& path, const BackgroundModel& bg);

}  // namespace crowdkit
