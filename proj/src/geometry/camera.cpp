#include "crowdkit/geometry/camera.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace crowdkit {

void CameraIntrinsics::validate() const {
    if (!(focal_length_px > 0.0)) throw std::invalid_argument("focal_length_px must be positive");
    if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
    if (!(depth_range_max > 0.0)) throw std::invalid_argument("depth_range_max must be positive");
}

std::vector<Point3> back_project(const DepthFrame& frame, const CameraIntrinsics& intrinsics) {
    intrinsics.validate();
    if (frame.width != intrinsics.width || frame.height != intrinsics.height)
        throw std::invalid_argument("back_project: frame dimensions do not match intrinsics");
    if (frame.depth.size() != static_cast<std::size_t>(frame.width) * frame.height)
        throw std::invalid_argument("back_project: depth buffer size mismatch");

    const double f = intrinsics.focal_length_px;
    const double cx = intrinsics.cx();
    const double cy = intrinsics.cy();

    std::vector<Point3> points;
    std::size_t idx = 0;
    for (int v = 0; v < frame.height; ++v) {
        for (int u = 0; u < frame.width; ++u, ++idx) {
            const double z = frame.depth[idx];
            if (!(z > kMinValidDepth) || z > intrinsics.depth_range_max) continue;
            points.push_back({(u - cx) * z / f, (v - cy) * z / f, z});
        }
    }
    return points;
}

namespace {

constexpr char kMagic[4] = {'D', 'P', 'F', '1'};

template <typename T>
void write_raw(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in, const std::string& path, const char* what) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error(path + ": truncated depth frame (" + what + ")");
    return v;
}

}  // namespace

DepthFrame read_depth_frame(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path + ": not a DPF1 depth frame");

    DepthFrame frame;
    frame.sensor_id = read_raw<std::uint32_t>(in, path, "sensor_id");
    frame.t = read_raw<double>(in, path, "t");
    const auto w = read_raw<std::uint32_t>(in, path, "width");
    const auto h = read_raw<std::uint32_t>(in, path, "height");
    if (w == 0 || h == 0 || w > 1u << 16 || h > 1u << 16)
        throw std::runtime_error(path + ": implausible frame dimensions");
    frame.width = static_cast<int>(w);
    frame.height = static_cast<int>(h);
    frame.depth.resize(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(frame.depth.data()),
            static_cast<std::streamsize>(frame.depth.size() * sizeof(float)));
    if (!in) throw std::runtime_error(path + ": truncated depth data");
    return frame;
}

void write_depth_frame(const std::string& path, const DepthFrame& frame) {
    if (frame.depth.size() != static_cast<std::size_t>(frame.width) * frame.height)
        throw std::invalid_argument("write_depth_frame: depth buffer size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(kMagic, 4);
    write_raw(out, frame.sensor_id);
    write_raw(out, frame.t);
    write_raw(out, static_cast<std::uint32_t>(frame.width));
    write_raw(out, static_cast<std::uint32_t>(frame.height));
    out.write(reinterpret_cast<const char*>(frame.depth.data()),
              static_cast<std::streamsize>(frame.depth.size() * sizeof(float)));
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace crowdkit
