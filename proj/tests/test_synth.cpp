#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

#include "crowdkit/detection/detect.hpp"
#include "crowdkit/geometry/camera.hpp"
#include "crowdkit/geometry/rigid.hpp"
#include "crowdkit/synth/synth.hpp"

using namespace crowdkit;

namespace {

WalkerSpec straight_walker(const std::string& id, double x0, double y0, double x1, double y1,
                           double t0, double t1, double height = 1.7) {
    WalkerSpec w;
    w.id = id;
    w.height = height;
    w.waypoints = {{t0, {x0, y0, 0.0}}, {t1, {x1, y1, 0.0}}};
    return w;
}

SyntheticScene single_sensor_scene() {
    SyntheticScene scene;
    scene.sensors.push_back({0, top_down_pose(0.0, 0.0, 4.5, 0.0)});
    scene.frame_rate = 30.0;
    scene.duration = 1.0;
    scene.noise_sigma = 0.0;
    scene.seed = 5;
    return scene;
}

std::vector<Point3> world_points(const SyntheticScene& scene, const DepthFrame& frame,
                                 std::size_t sensor_index) {
    const auto cam = back_project(frame, scene.intrinsics);
    return apply_transform(scene.sensors[sensor_index].pose, cam);
}

}  // namespace

TEST_CASE("walker_position interpolates between waypoints") {
    const WalkerSpec w = straight_walker("w", -1, 0, 1, 2, 0.0, 2.0);
    double x = 0, y = 0;

    SUBCASE("midpoint") {
        REQUIRE(walker_position(w, 1.0, &x, &y));
        CHECK(x == doctest::Approx(0.0));
        CHECK(y == doctest::Approx(1.0));
    }
    SUBCASE("per-waypoint exactness and clipping") {
        REQUIRE(walker_position(w, 0.0, &x, &y));
        CHECK(x == doctest::Approx(-1.0));
        REQUIRE(walker_position(w, 2.0, &x, &y));
        CHECK(x == doctest::Approx(1.0));
        CHECK_FALSE(walker_position(w, -0.01, &x, &y));
        CHECK_FALSE(walker_position(w, 2.01, &x, &y));
    }
    SUBCASE("validation rejects out-of-band heights and bad waypoints") {
        WalkerSpec bad = w;
        bad.height = 1.2;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        bad = w;
        bad.height = 2.3;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        bad = w;
        bad.waypoints.clear();
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        bad = w;
        bad.waypoints[1].t = bad.waypoints[0].t;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    }
}

TEST_CASE("top_down_pose looks straight down with yaw about the vertical") {
    const RigidTransform pose = top_down_pose(1.0, 2.0, 4.5, 0.0);

    SUBCASE("the camera origin sits at the mount point") {
        const Point3 origin = apply_transform(pose, {{0, 0, 0}})[0];
        CHECK(origin.x == doctest::Approx(1.0));
        CHECK(origin.y == doctest::Approx(2.0));
        CHECK(origin.z == doctest::Approx(4.5));
    }

    SUBCASE("a point 3 m along the optical axis lands 3 m below") {
        const Point3 p = apply_transform(pose, {{0, 0, 3}})[0];
        CHECK(p.x == doctest::Approx(1.0));
        CHECK(p.y == doctest::Approx(2.0));
        CHECK(p.z == doctest::Approx(1.5));
    }

    SUBCASE("at zero yaw the image u-axis follows world x") {
        const Point3 p = apply_transform(pose, {{0.5, 0, 3}})[0];
        CHECK(p.x == doctest::Approx(1.5));
        CHECK(p.y == doctest::Approx(2.0));
    }

    SUBCASE("rotations stay rigid for any yaw") {
        for (double yaw : {0.0, 30.0, 90.0, 135.0, 270.0}) {
            const RigidTransform t = top_down_pose(0, 0, 4.5, yaw);
            CHECK_NOTHROW(t.validate());
        }
    }
}

TEST_CASE("render_depth composes walls, walkers, range, and noise") {
    SUBCASE("empty scene renders all-invalid") {
        SyntheticScene scene = single_sensor_scene();
        const DepthFrame f = render_depth(scene, 0, 0.0);
        REQUIRE(f.width == scene.intrinsics.width);
        for (float d : f.depth) CHECK(d == 0.0f);
    }

    SUBCASE("a walker under the sensor shows crown depth at the center pixel") {
        SyntheticScene scene = single_sensor_scene();
        scene.walkers.push_back(straight_walker("w", 0, 0, 0, 0.001, 0.0, 1.0));
        const DepthFrame f = render_depth(scene, 0, 0.0);
        const float center = f.at(scene.intrinsics.width / 2, scene.intrinsics.height / 2);
        CHECK(center == doctest::Approx(4.5 - 1.7).epsilon(5e-4));
    }

    SUBCASE("surfaces beyond the range limit vanish") {
        SyntheticScene scene = single_sensor_scene();
        // crown at 0.3 m: depth 4.2 m > 4.0 m range
        WalkerSpec shrimp = straight_walker("s", 0, 0, 0, 0.001, 0.0, 1.0);
        shrimp.height = 1.7;
        scene.walkers.push_back(shrimp);
        scene.sensors[0].pose = top_down_pose(0.0, 0.0, 5.8, 0.0);
        const DepthFrame f = render_depth(scene, 0, 0.0);
        for (float d : f.depth) CHECK(d == 0.0f);
    }

    SUBCASE("walls render and the wall base shortcut changes nothing") {
        SyntheticScene scene = single_sensor_scene();
        scene.walls.push_back({{-2, 0.8, 0}, {2, 1.0, 2.2}});
        scene.walkers.push_back(straight_walker("w", 0, -0.3, 0.4, -0.3, 0.0, 1.0));
        const DepthFrame base = render_walls(scene, 0);
        bool wall_seen = false;
        for (float d : base.depth) wall_seen = wall_seen || d > 0;
        CHECK(wall_seen);
        const DepthFrame direct = render_depth(scene, 0, 0.5);
        const DepthFrame via_base = render_depth(scene, 0, 0.5, &base);
        REQUIRE(direct.depth.size() == via_base.depth.size());
        for (std::size_t i = 0; i < direct.depth.size(); ++i)
            REQUIRE(direct.depth[i] == via_base.depth[i]);
    }

    SUBCASE("rendering is deterministic per seed and responds to noise") {
        SyntheticScene scene = single_sensor_scene();
        scene.noise_sigma = 0.01;
        scene.walkers.push_back(straight_walker("w", 0, 0, 0.3, 0, 0.0, 1.0));
        const DepthFrame a = render_depth(scene, 0, 0.5);
        const DepthFrame b = render_depth(scene, 0, 0.5);
        REQUIRE(a.depth.size() == b.depth.size());
        for (std::size_t i = 0; i < a.depth.size(); ++i) REQUIRE(a.depth[i] == b.depth[i]);

        SyntheticScene other = scene;
        other.seed = scene.seed + 1;
        const DepthFrame c = render_depth(other, 0, 0.5);
        int diffs = 0;
        for (std::size_t i = 0; i < a.depth.size(); ++i) diffs += a.depth[i] != c.depth[i];
        CHECK(diffs > 0);

        // noise perturbs rendered surfaces before the range clip, so the only
        // way a quiet-zero pixel turns on is a surface just past the range cap
        // getting nudged back under it
        SyntheticScene clean = scene;
        clean.noise_sigma = 0.0;
        const DepthFrame quiet = render_depth(clean, 0, 0.5);
        const double range = scene.intrinsics.depth_range_max;
        for (std::size_t i = 0; i < a.depth.size(); ++i) {
            if (quiet.depth[i] == 0.0f) {
                if (a.depth[i] != 0.0f) CHECK(a.depth[i] > range - 0.01 * 6);
            } else {
                if (a.depth[i] != 0.0f) CHECK(std::abs(a.depth[i] - quiet.depth[i]) < 0.01 * 6);
            }
        }
    }
}

TEST_CASE("noiseless rendering localizes heads within the quantization bound") {
    SyntheticScene scene = single_sensor_scene();
    scene.walkers.push_back(straight_walker("w0", -0.8, -0.4, -0.8, -0.4001, 0.0, 1.0));
    scene.walkers.push_back(straight_walker("w1", 0.7, 0.5, 0.7, 0.5001, 0.0, 1.0, 1.85));
    const DepthFrame f = render_depth(scene, 0, 0.0);
    const auto pts = world_points(scene, f, 0);
    REQUIRE(!pts.empty());

    DetectionConfig cfg;
    BackgroundModel bg;
    const auto dets = detect_frame(pts, 0.0, 0, bg, cfg, 77);
    REQUIRE(dets.size() == 2);
    const double want[2][3] = {{-0.8, -0.4, 1.7}, {0.7, 0.5, 1.85}};
    for (const auto& w : want) {
        double best = 1e300;
        double best_z = 0;
        for (const auto& d : dets) {
            const double dist = std::hypot(d.position.x - w[0], d.position.y - w[1]);
            if (dist < best) {
                best = dist;
                best_z = d.position.z;
            }
        }
        CHECK(best < 0.02);
        CHECK(best_z == doctest::Approx(w[2]).epsilon(0.02));
    }
}

TEST_CASE("ground_truth clips per sensor and names fragments") {
    SUBCASE("a walker fully in view gives one fragment equal to the global track") {
        SyntheticScene scene = single_sensor_scene();
        scene.duration = 2.0;
        scene.walkers.push_back(straight_walker("w", -0.8, 0, 0.8, 0, 0.0, 2.0));
        const auto gt = ground_truth(scene);
        REQUIRE(gt.global.size() == 1);
        REQUIRE(gt.per_sensor.size() == 1);
        REQUIRE(gt.per_sensor[0].size() == 1);
        const auto& g = gt.global[0];
        const auto& s = gt.per_sensor[0][0];
        CHECK(g.id() == "w");
        CHECK(s.id() == "w@s0.0");
        REQUIRE(g.size() == static_cast<std::size_t>(scene.frame_count()));
        REQUIRE(s.size() == g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(s.points()[i].t == doctest::Approx(g.points()[i].t));
            CHECK(s.points()[i].position.x == doctest::Approx(g.points()[i].position.x));
        }
        CHECK(g.points()[0].position.z == doctest::Approx(1.7));
    }

    SUBCASE("a seam crossing splits into fragments whose union covers the path") {
        SyntheticScene scene;
        scene.sensors.push_back({0, top_down_pose(-1.5, 0.0, 4.5, 0.0)});
        scene.sensors.push_back({1, top_down_pose(1.5, 0.0, 4.5, 0.0)});
        scene.frame_rate = 30.0;
        scene.duration = 4.0;
        scene.walkers.push_back(straight_walker("w", -2.2, 0, 2.2, 0, 0.0, 4.0));
        const auto gt = ground_truth(scene);
        REQUIRE(gt.per_sensor.size() == 2);
        REQUIRE(gt.per_sensor[0].size() == 1);
        REQUIRE(gt.per_sensor[1].size() == 1);

        std::set<long long> covered;
        for (const auto& set : gt.per_sensor)
            for (const auto& tr : set.trajectories())
                for (const auto& p : tr.points()) covered.insert(std::llround(p.t * 30));
        for (const auto& p : gt.global[0].points()) {
            CHECK(covered.count(std::llround(p.t * 30)) == 1);
        }

        // each sensor only sees what projects into its image
        const double half_span = (scene.intrinsics.width / 2.0) / scene.intrinsics.focal_length_px *
                                 (4.5 - 1.7);
        for (int sidx = 0; sidx < 2; ++sidx) {
            const double cx = sidx == 0 ? -1.5 : 1.5;
            for (const auto& p : gt.per_sensor[sidx][0].points())
                CHECK(std::abs(p.position.x - cx) <= half_span + 0.05);
        }
    }

    SUBCASE("fragments shorter than 3 frames are dropped") {
        SyntheticScene scene = single_sensor_scene();
        scene.duration = 1.0;
        // sprints through the view in under 2 frames' worth of visibility
        WalkerSpec fast = straight_walker("f", -30, 0, 30, 0, 0.0, 1.0);
        scene.walkers.push_back(fast);
        const auto gt = ground_truth(scene);
        // 60 m/s: inside the ~3 m view for ~0.05 s ~ 1-2 frames
        CHECK(gt.per_sensor[0].size() == 0);
        CHECK(gt.global.size() == 1);
    }
}

TEST_CASE("scene_background swallows every wall return") {
    SyntheticScene scene = single_sensor_scene();
    scene.noise_sigma = 0.005;
    scene.walls.push_back({{-2, 0.7, 0}, {2, 0.9, 2.5}});
    scene.walls.push_back({{-2, -0.9, 0}, {2, -0.7, 2.5}});
    const BackgroundModel bg = scene_background(scene);
    REQUIRE(bg.boxes.size() == 2);
    const DepthFrame f = render_depth(scene, 0, 0.0);
    const auto pts = world_points(scene, f, 0);
    REQUIRE(!pts.empty());
    const auto kept = subtract_background(pts, bg);
    CHECK(kept.empty());
}

TEST_CASE("scene spec text round-trips") {
    SyntheticScene scene;
    scene.frame_rate = 25.0;
    scene.duration = 3.5;
    scene.noise_sigma = 0.007;
    scene.seed = 99;
    scene.intrinsics.focal_length_px = 300.0;
    scene.intrinsics.width = 320;
    scene.intrinsics.height = 240;
    scene.sensors.push_back({2, top_down_pose(-1.25, 0.5, 4.5, 90.0)});
    scene.walls.push_back({{-3, 1, 0}, {3, 1.2, 2.0}});
    WalkerSpec w = straight_walker("zig", -2, 0, 2, 0, 0.0, 3.5, 1.62);
    w.waypoints.insert(w.waypoints.begin() + 1, {1.0, {0.0, 0.5, 0.0}});
    scene.walkers.push_back(w);

    const std::string text = scene_spec_text(scene);
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    const SyntheticScene back = scene_spec_from_lines(lines);
    CHECK(back.frame_rate == doctest::Approx(25.0));
    CHECK(back.duration == doctest::Approx(3.5));
    CHECK(back.noise_sigma == doctest::Approx(0.007));
    CHECK(back.seed == 99);
    CHECK(back.intrinsics.width == 320);
    REQUIRE(back.sensors.size() == 1);
    CHECK(back.sensors[0].id == 2);
    REQUIRE(back.walkers.size() == 1);
    CHECK(back.walkers[0].id == "zig");
    CHECK(back.walkers[0].height == doctest::Approx(1.62));
    REQUIRE(back.walkers[0].waypoints.size() == 3);
    CHECK(back.walkers[0].waypoints[1].position.y == doctest::Approx(0.5));
    REQUIRE(back.walls.size() == 1);
    CHECK(back.walls[0].max.y == doctest::Approx(1.2));

    SUBCASE("sensor poses survive the round-trip") {
        const Point3 a = apply_transform(scene.sensors[0].pose, {{0.3, -0.2, 2.0}})[0];
        const Point3 b = apply_transform(back.sensors[0].pose, {{0.3, -0.2, 2.0}})[0];
        CHECK(a.x == doctest::Approx(b.x).epsilon(1e-9));
        CHECK(a.y == doctest::Approx(b.y).epsilon(1e-9));
        CHECK(a.z == doctest::Approx(b.z).epsilon(1e-9));
    }

    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_WITH_AS(scene_spec_from_lines({"bogus_key = 3"}),
                             doctest::Contains("unknown scene key"), std::runtime_error);
    }
}

TEST_CASE("default_corridor_scene is a valid three-sensor corridor") {
    const SyntheticScene scene = default_corridor_scene();
    CHECK_NOTHROW(scene.validate());
    CHECK(scene.sensors.size() == 3);
    CHECK(scene.walls.size() >= 2);
    CHECK(scene.frame_count() > 0);
}
