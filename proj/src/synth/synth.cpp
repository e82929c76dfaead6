#include "crowdkit/synth/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "crowdkit/common/rng.hpp"
#include "crowdkit/common/textio.hpp"

namespace crowdkit {

void WalkerSpec::validate() const {
    if (id.empty()) throw std::invalid_argument("WalkerSpec: empty id");
    if (!(height >= 1.4 && height <= 2.1))
        throw std::invalid_argument("WalkerSpec '" + id + "': height must lie in [1.4, 2.1] m");
    if (!(width > 0.0 && width < 1.0))
        throw std::invalid_argument("WalkerSpec '" + id + "': implausible body width");
    if (waypoints.empty()) throw std::invalid_argument("WalkerSpec '" + id + "': no waypoints");
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
        if (!(waypoints[i].t < waypoints[i + 1].t))
            throw std::invalid_argument("WalkerSpec '" + id + "': waypoint times must increase");
    for (const auto& p : waypoints)
        if (!std::isfinite(p.t) || !p.position.finite())
            throw std::invalid_argument("WalkerSpec '" + id + "': non-finite waypoint");
}

bool walker_position(const WalkerSpec& walker, double t, double* x, double* y) {
    const auto& wp = walker.waypoints;
    if (t < wp.front().t || t > wp.back().t) return false;
    const auto it = std::upper_bound(wp.begin(), wp.end(), t,
                                     [](double v, const TrajectoryPoint& p) { return v < p.t; });
    std::size_t k = it == wp.begin() ? 0 : static_cast<std::size_t>(it - wp.begin()) - 1;
    if (wp.size() >= 2 && k + 1 >= wp.size()) k = wp.size() - 2;
    const auto& p0 = wp[k];
    const auto& p1 = wp[std::min(k + 1, wp.size() - 1)];
    const double span = p1.t - p0.t;
    const double u = span > 0.0 ? (t - p0.t) / span : 0.0;
    if (x) *x = p0.position.x + u * (p1.position.x - p0.position.x);
    if (y) *y = p0.position.y + u * (p1.position.y - p0.position.y);
    return true;
}

RigidTransform top_down_pose(double x, double y, double z, double yaw_deg) {
    const double rad = yaw_deg * (std::acos(-1.0) / 180.0);
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    RigidTransform tf;
    // Rz(yaw) composed with a flip of the camera y and z axes: the optical
    // axis points straight down while the determinant stays +1.
    tf.rotation = {c, s, 0.0, s, -c, 0.0, 0.0, 0.0, -1.0};
    tf.translation = {x, y, z};
    tf.validate();
    return tf;
}

void SyntheticScene::validate() const {
    intrinsics.validate();
    if (!(frame_rate > 0.0)) throw std::invalid_argument("SyntheticScene: frame_rate must be positive");
    if (!(duration > 0.0)) throw std::invalid_argument("SyntheticScene: duration must be positive");
    if (!(noise_sigma >= 0.0)) throw std::invalid_argument("SyntheticScene: negative noise_sigma");
    std::set<std::string> walker_ids;
    for (const auto& w : walkers) {
        w.validate();
        if (!walker_ids.insert(w.id).second)
            throw std::invalid_argument("SyntheticScene: duplicate walker id '" + w.id + "'");
    }
    std::set<std::uint32_t> sensor_ids;
    for (const auto& s : sensors) {
        s.pose.validate();
        if (!sensor_ids.insert(s.id).second)
            throw std::invalid_argument("SyntheticScene: duplicate sensor id " +
                                        std::to_string(s.id));
    }
    for (const auto& b : walls)
        if (!(b.min.x <= b.max.x && b.min.y <= b.max.y && b.min.z <= b.max.z))
            throw std::invalid_argument("SyntheticScene: inverted wall box");
}

int SyntheticScene::frame_count() const {
    return static_cast<int>(std::llround(duration * frame_rate));
}

namespace {

double dot3(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Point3 rotate(const RigidTransform& tf, const Point3& v) {
    const auto& r = tf.rotation;
    return {r[0] * v.x + r[1] * v.y + r[2] * v.z, r[3] * v.x + r[4] * v.y + r[5] * v.z,
            r[6] * v.x + r[7] * v.y + r[8] * v.z};
}

// Smallest s > 0 with s*dir on the capsule (a, b, r); 0 when the ray misses.
// The ray starts at the origin of the same frame.
double intersect_capsule(const Point3& a, const Point3& b, double r, const Point3& dir) {
    double best = 0.0;
    auto consider = [&](double s) {
        if (s > 0.0 && (best == 0.0 || s < best)) best = s;
    };

    const Point3 axis = b - a;
    const double len = norm(axis);
    if (len > 0.0) {
        const Point3 v = (1.0 / len) * axis;
        const double d_par = dot3(dir, v);
        const Point3 w0 = -1.0 * a;
        const double w_par = dot3(w0, v);
        const Point3 d_perp = dir - d_par * v;
        const Point3 w_perp = w0 - w_par * v;
        const double qa = dot3(d_perp, d_perp);
        const double qb = 2.0 * dot3(w_perp, d_perp);
        const double qc = dot3(w_perp, w_perp) - r * r;
        if (qa > 1e-18) {
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0) {
                const double s = (-qb - std::sqrt(disc)) / (2.0 * qa);
                const double axial = w_par + s * d_par;
                if (axial >= 0.0 && axial <= len) consider(s);
            }
        }
    }
    for (const Point3& c : {a, b}) {
        const double qa = dot3(dir, dir);
        const double qb = -2.0 * dot3(dir, c);
        const double qc = dot3(c, c) - r * r;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) consider((-qb - std::sqrt(disc)) / (2.0 * qa));
    }
    return best;
}

// Entry parameter of the ray o + s*d into the box, 0 when it misses or
// starts inside.
double intersect_box(const Point3& o, const Point3& d, const BackgroundBox& box) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    const double os[3] = {o.x, o.y, o.z};
    const double ds[3] = {d.x, d.y, d.z};
    const double lo[3] = {box.min.x, box.min.y, box.min.z};
    const double hi[3] = {box.max.x, box.max.y, box.max.z};
    for (int k = 0; k < 3; ++k) {
        if (std::abs(ds[k]) < 1e-15) {
            if (os[k] < lo[k] || os[k] > hi[k]) return 0.0;
            continue;
        }
        const double inv = 1.0 / ds[k];
        double ta = (lo[k] - os[k]) * inv;
        double tb = (hi[k] - os[k]) * inv;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    }
    if (t0 > t1 || t0 <= 0.0) return 0.0;
    return t0;
}

void check_sensor_index(const SyntheticScene& scene, std::size_t sensor_index) {
    if (sensor_index >= scene.sensors.size())
        throw std::out_of_range("sensor index out of range");
}

}  // namespace

DepthFrame render_walls(const SyntheticScene& scene, std::size_t sensor_index) {
    check_sensor_index(scene, sensor_index);
    const auto& sensor = scene.sensors[sensor_index];
    const auto& cam = scene.intrinsics;

    DepthFrame frame;
    frame.sensor_id = sensor.id;
    frame.t = 0.0;
    frame.width = cam.width;
    frame.height = cam.height;
    frame.depth.assign(static_cast<std::size_t>(cam.width) * cam.height, 0.0f);
    if (scene.walls.empty()) return frame;

    const Point3 origin = sensor.pose.translation;
    for (int v = 0; v < cam.height; ++v) {
        for (int u = 0; u < cam.width; ++u) {
            const Point3 dir_cam{(u - cam.cx()) / cam.focal_length_px,
                                 (v - cam.cy()) / cam.focal_length_px, 1.0};
            const Point3 dir_world = rotate(sensor.pose, dir_cam);
            double best = 0.0;
            for (const auto& box : scene.walls) {
                const double s = intersect_box(origin, dir_world, box);
                if (s > 0.0 && (best == 0.0 || s < best)) best = s;
            }
            if (best > 0.0) frame.at(u, v) = static_cast<float>(best);
        }
    }
    return frame;
}

DepthFrame render_depth(const SyntheticScene& scene, std::size_t sensor_index, double t,
                        const DepthFrame* wall_base) {
    check_sensor_index(scene, sensor_index);
    const auto& sensor = scene.sensors[sensor_index];
    const auto& cam = scene.intrinsics;

    DepthFrame frame;
    if (wall_base) {
        if (wall_base->sensor_id != sensor.id || wall_base->width != cam.width ||
            wall_base->height != cam.height)
            throw std::invalid_argument("render_depth: wall base does not match the sensor");
        frame = *wall_base;
    } else {
        frame = render_walls(scene, sensor_index);
    }
    frame.t = t;

    const RigidTransform world_to_cam = sensor.pose.inverse();
    const double f = cam.focal_length_px;

    for (const auto& walker : scene.walkers) {
        double wx = 0.0, wy = 0.0;
        if (!walker_position(walker, t, &wx, &wy)) continue;
        const double r = walker.width / 2.0;
        const Point3 a_cam = apply_transform(world_to_cam, {wx, wy, r});
        const Point3 b_cam = apply_transform(world_to_cam, {wx, wy, walker.height - r});
        if (a_cam.z <= 0.05 && b_cam.z <= 0.05) continue;

        // Conservative pixel rectangle around both end spheres.
        double u_lo = std::numeric_limits<double>::infinity(), u_hi = -u_lo;
        double v_lo = u_lo, v_hi = -u_lo;
        for (const Point3& c : {a_cam, b_cam}) {
            const double z = std::max(c.z, 0.05);
            const double uc = f * c.x / z + cam.cx();
            const double vc = f * c.y / z + cam.cy();
            const double half = f * r / std::max(z - r, 0.05) + 2.0;
            u_lo = std::min(u_lo, uc - half);
            u_hi = std::max(u_hi, uc + half);
            v_lo = std::min(v_lo, vc - half);
            v_hi = std::max(v_hi, vc + half);
        }
        const int u0 = std::max(0, static_cast<int>(std::floor(u_lo)));
        const int u1 = std::min(cam.width - 1, static_cast<int>(std::ceil(u_hi)));
        const int v0 = std::max(0, static_cast<int>(std::floor(v_lo)));
        const int v1 = std::min(cam.height - 1, static_cast<int>(std::ceil(v_hi)));

        for (int v = v0; v <= v1; ++v) {
            for (int u = u0; u <= u1; ++u) {
                const Point3 dir{(u - cam.cx()) / f, (v - cam.cy()) / f, 1.0};
                const double s = intersect_capsule(a_cam, b_cam, r, dir);
                if (s <= 0.0) continue;
                float& cell = frame.at(u, v);
                if (cell == 0.0f || s < cell) cell = static_cast<float>(s);
            }
        }
    }

    Rng rng(derive_seed(scene.seed, sensor.id, std::bit_cast<std::uint64_t>(t)));
    const bool noisy = scene.noise_sigma > 0.0;
    for (auto& cell : frame.depth) {
        if (cell == 0.0f) continue;
        double d = cell;
        if (noisy) d += scene.noise_sigma * rng.normal();
        cell = (d <= 0.0 || d > cam.depth_range_max) ? 0.0f : static_cast<float>(d);
    }
    return frame;
}

GroundTruth ground_truth(const SyntheticScene& scene) {
    scene.validate();
    const int n_frames = scene.frame_count();

    GroundTruth truth;
    truth.global = TrajectorySet(scene.frame_rate);
    truth.per_sensor.assign(scene.sensors.size(), TrajectorySet(scene.frame_rate));

    std::vector<RigidTransform> world_to_cam;
    world_to_cam.reserve(scene.sensors.size());
    for (const auto& s : scene.sensors) world_to_cam.push_back(s.pose.inverse());

    const auto& cam = scene.intrinsics;
    for (const auto& walker : scene.walkers) {
        std::vector<TrajectoryPoint> global_points;
        std::vector<std::vector<TrajectoryPoint>> visible(scene.sensors.size());
        std::vector<int> fragment_serial(scene.sensors.size(), 0);

        auto flush = [&](std::size_t si) {
            auto& run = visible[si];
            if (run.size() >= 3) {
                const std::string id = walker.id + "@s" +
                                       std::to_string(scene.sensors[si].id) + "." +
                                       std::to_string(fragment_serial[si]++);
                truth.per_sensor[si].add(Trajectory(id, run));
            }
            run.clear();
        };

        for (int k = 0; k < n_frames; ++k) {
            const double t = scene.frame_time(k);
            double x = 0.0, y = 0.0;
            const bool present = walker_position(walker, t, &x, &y);
            if (present) global_points.push_back({t, {x, y, walker.height}});
            for (std::size_t si = 0; si < scene.sensors.size(); ++si) {
                bool vis = false;
                if (present) {
                    const Point3 crown =
                        apply_transform(world_to_cam[si], {x, y, walker.height});
                    if (crown.z > kMinValidDepth && crown.z <= cam.depth_range_max) {
                        const double u = cam.focal_length_px * crown.x / crown.z + cam.cx();
                        const double v = cam.focal_length_px * crown.y / crown.z + cam.cy();
                        vis = u >= 0.0 && u < cam.width && v >= 0.0 && v < cam.height;
                    }
                }
                if (vis)
                    visible[si].push_back({t, {x, y, walker.height}});
                else
                    flush(si);
            }
        }
        for (std::size_t si = 0; si < scene.sensors.size(); ++si) flush(si);
        if (!global_points.empty()) truth.global.add(Trajectory(walker.id, global_points));
    }
    return truth;
}

BackgroundModel scene_background(const SyntheticScene& scene) {
    const double pad = std::max(0.06, 10.0 * scene.noise_sigma);
    BackgroundModel bg;
    for (const auto& b : scene.walls) {
        BackgroundBox inflated;
        inflated.min = {b.min.x - pad, b.min.y - pad, b.min.z - pad};
        inflated.max = {b.max.x + pad, b.max.y + pad, b.max.z + pad};
        bg.boxes.push_back(inflated);
    }
    return bg;
}

std::string scene_spec_text(const SyntheticScene& scene) {
    std::ostringstream os;
    os << "frame_rate = " << fmt_double(scene.frame_rate) << "\n";
    os << "duration = " << fmt_double(scene.duration) << "\n";
    os << "noise_sigma = " << fmt_double(scene.noise_sigma) << "\n";
    os << "seed = " << scene.seed << "\n";
    os << "focal_px = " << fmt_double(scene.intrinsics.focal_length_px) << "\n";
    os << "width_px = " << scene.intrinsics.width << "\n";
    os << "height_px = " << scene.intrinsics.height << "\n";
    os << "depth_range_max = " << fmt_double(scene.intrinsics.depth_range_max) << "\n";
    for (const auto& s : scene.sensors) {
        // Recover (x, y, z, yaw) from the pose; only top-down poses are
        // representable in the text form.
        const double yaw = std::atan2(s.pose.rotation[1], s.pose.rotation[0]) * 180.0 /
                           std::acos(-1.0);
        os << "sensor " << s.id << ' ' << fmt_double(s.pose.translation.x) << ' '
           << fmt_double(s.pose.translation.y) << ' ' << fmt_double(s.pose.translation.z) << ' '
           << fmt_double(yaw) << "\n";
    }
    for (const auto& b : scene.walls)
        os << "wall " << fmt_double(b.min.x) << ' ' << fmt_double(b.min.y) << ' '
           << fmt_double(b.min.z) << ' ' << fmt_double(b.max.x) << ' ' << fmt_double(b.max.y)
           << ' ' << fmt_double(b.max.z) << "\n";
    for (const auto& w : scene.walkers) {
        os << "walker " << w.id << ' ' << fmt_double(w.height) << ' ' << fmt_double(w.width);
        for (const auto& p : w.waypoints)
            os << ' ' << fmt_double(p.t) << ' ' << fmt_double(p.position.x) << ' '
               << fmt_double(p.position.y);
        os << "\n";
    }
    return os.str();
}

SyntheticScene scene_spec_from_lines(const std::vector<std::string>& lines) {
    SyntheticScene scene;
    int line_no = 0;
    for (const auto& raw : lines) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = " (scene spec line " + std::to_string(line_no) + ")";
        const auto tokens = split_ws(line);

        if (tokens[0] == "sensor") {
            if (tokens.size() != 6) throw std::runtime_error("sensor line needs 5 fields" + where);
            SensorSpec s;
            s.id = static_cast<std::uint32_t>(parse_long(tokens[1]));
            s.pose = top_down_pose(parse_double(tokens[2]), parse_double(tokens[3]),
                                   parse_double(tokens[4]), parse_double(tokens[5]));
            scene.sensors.push_back(s);
        } else if (tokens[0] == "wall") {
            if (tokens.size() != 7) throw std::runtime_error("wall line needs 6 fields" + where);
            BackgroundBox b;
            b.min = {parse_double(tokens[1]), parse_double(tokens[2]), parse_double(tokens[3])};
            b.max = {parse_double(tokens[4]), parse_double(tokens[5]), parse_double(tokens[6])};
            scene.walls.push_back(b);
        } else if (tokens[0] == "walker") {
            if (tokens.size() < 7 || (tokens.size() - 4) % 3 != 0)
                throw std::runtime_error("walker line needs id, height, width and (t, x, y) triples" +
                                         where);
            WalkerSpec w;
            w.id = tokens[1];
            w.height = parse_double(tokens[2]);
            w.width = parse_double(tokens[3]);
            for (std::size_t k = 4; k + 2 < tokens.size(); k += 3)
                w.waypoints.push_back({parse_double(tokens[k]),
                                       {parse_double(tokens[k + 1]), parse_double(tokens[k + 2]),
                                        0.0}});
            scene.walkers.push_back(std::move(w));
        } else {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("expected key = value or a directive" + where);
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "frame_rate") scene.frame_rate = parse_double(value);
            else if (key == "duration") scene.duration = parse_double(value);
            else if (key == "noise_sigma") scene.noise_sigma = parse_double(value);
            else if (key == "seed") scene.seed = static_cast<std::uint64_t>(parse_long(value));
            else if (key == "focal_px") scene.intrinsics.focal_length_px = parse_double(value);
            else if (key == "width_px") scene.intrinsics.width = static_cast<int>(parse_long(value));
            else if (key == "height_px") scene.intrinsics.height = static_cast<int>(parse_long(value));
            else if (key == "depth_range_max") scene.intrinsics.depth_range_max = parse_double(value);
            else throw std::runtime_error("unknown scene key '" + key + "'" + where);
        }
    }
    scene.validate();
    return scene;
}

SyntheticScene read_scene_spec(const std::string& path) {
    try {
        return scene_spec_from_lines(read_lines(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_scene_spec(const std::string& path, const SyntheticScene& scene) {
    write_text_file(path, scene_spec_text(scene));
}

SyntheticScene default_corridor_scene() {
    SyntheticScene scene;
    scene.sensors = {{0, top_down_pose(-2.2, 0.0, 4.5, 0.0)},
                     {1, top_down_pose(0.0, 0.0, 4.5, 0.0)},
                     {2, top_down_pose(2.2, 0.0, 4.5, 0.0)}};
    scene.walls = {{{-4.0, 1.0, 0.0}, {4.0, 1.12, 2.4}},
                   {{-4.0, -1.12, 0.0}, {4.0, -1.0, 2.4}}};
    return scene;
}

}  // namespace crowdkit
