#include "crowdkit/cli/cli.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "crowdkit/calibration/fit.hpp"
#include "crowdkit/calibration/replay.hpp"
#include "crowdkit/common/rng.hpp"
#include "crowdkit/common/textio.hpp"
#include "crowdkit/core/trajectory_io.hpp"
#include "crowdkit/detection/background.hpp"
#include "crowdkit/detection/detect.hpp"
#include "crowdkit/geometry/camera.hpp"
#include "crowdkit/geometry/rigid.hpp"
#include "crowdkit/metrics/evaluate.hpp"
#include "crowdkit/socialforce/model.hpp"
#include "crowdkit/stats/stats.hpp"
#include "crowdkit/stitching/stitch.hpp"
#include "crowdkit/synth/synth.hpp"
#include "crowdkit/tracking/tracker.hpp"

namespace fs = std::filesystem;

namespace crowdkit {
namespace {

struct Common {
    std::string config_path;
    std::uint64_t seed = 1;
    bool strict = false;
    std::string out_dir = ".";
    std::vector<std::string> warnings;

    void warn(const std::string& msg) {
        warnings.push_back(msg);
        std::cerr << "warning: " << msg << "\n";
    }
    // Warnings are advisory unless --strict promotes them to a failure.
    int finish() const { return strict && !warnings.empty() ? 2 : 0; }

    Config load_config() const {
        return config_path.empty() ? Config() : Config::from_file(config_path);
    }
    // Relative paths inside a config file are taken relative to the config
    // file itself, so generated datasets stay relocatable.
    std::string resolve(const std::string& path) const {
        if (path.empty() || config_path.empty() || fs::path(path).is_absolute()) return path;
        return (fs::path(config_path).parent_path() / path).string();
    }
    std::string out(const std::string& name) const {
        fs::create_directories(out_dir);
        return (fs::path(out_dir) / name).string();
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "Flat key = value configuration file");
    cmd->add_option("--seed", c.seed, "Master seed; every stage seed derives from it");
    cmd->add_flag("--strict", c.strict, "Exit 2 when any degenerate-data warning was issued");
    cmd->add_option("--out", c.out_dir, "Output directory, created if missing");
}

// Wraps Config and records every value actually consulted, so each output
// file can embed the full effective configuration, defaults included.
class EchoConfig {
  public:
    explicit EchoConfig(Config base) : base_(std::move(base)) {}

    double num(const std::string& key, double fallback) {
        const double v = base_.get(key, fallback);
        eff_[key] = fmt_double(v);
        return v;
    }
    long integer(const std::string& key, long fallback) {
        const long v = base_.get(key, fallback);
        eff_[key] = std::to_string(v);
        return v;
    }
    std::string text(const std::string& key, const std::string& fallback) {
        const std::string v = base_.get(key, fallback);
        eff_[key] = v;
        return v;
    }
    bool flag(const std::string& key, bool fallback) {
        const bool v = base_.get(key, static_cast<long>(fallback)) != 0;
        eff_[key] = v ? "1" : "0";
        return v;
    }
    void note(const std::string& key, const std::string& value) { eff_[key] = value; }

    std::map<std::string, std::string> metadata(const std::string& command,
                                                std::uint64_t seed) const {
        auto m = eff_;
        m["command"] = command;
        m["seed"] = std::to_string(seed);
        return m;
    }
    std::string comment_block(const std::string& command, std::uint64_t seed) const {
        std::ostringstream os;
        for (const auto& [k, v] : metadata(command, seed)) os << "# " << k << " = " << v << "\n";
        return os.str();
    }

  private:
    Config base_;
    std::map<std::string, std::string> eff_;
};

// Match file: one correspondence per line, "sensor_id wx wy wz cx cy cz"
// (world point, then the same point in that sensor's camera frame).
std::map<std::uint32_t, std::vector<PointMatch>> read_matches_file(const std::string& path) {
    std::map<std::uint32_t, std::vector<PointMatch>> out;
    int line_no = 0;
    for (const auto& raw : read_lines(path)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto t = split_ws(line);
        if (t.size() != 7)
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": expected 'sensor_id wx wy wz cx cy cz'");
        PointMatch m;
        m.world = {parse_double(t[1]), parse_double(t[2]), parse_double(t[3])};
        m.camera = {parse_double(t[4]), parse_double(t[5]), parse_double(t[6])};
        out[static_cast<std::uint32_t>(parse_long(t[0]))].push_back(m);
    }
    return out;
}

// Obstacle file: one wall segment per line, "x0 y0 x1 y1" (floor plane).
std::vector<Obstacle> read_obstacles_file(const std::string& path) {
    std::vector<Obstacle> out;
    int line_no = 0;
    for (const auto& raw : read_lines(path)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto t = split_ws(line);
        if (t.size() != 4)
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": expected 'x0 y0 x1 y1'");
        Obstacle o;
        o.p0 = {parse_double(t[0]), parse_double(t[1])};
        o.p1 = {parse_double(t[2]), parse_double(t[3])};
        o.validate();
        out.push_back(o);
    }
    return out;
}

std::vector<Obstacle> load_obstacles(EchoConfig& cfg, const Common& c) {
    const std::string path = c.resolve(cfg.text("obstacles_file", ""));
    if (path.empty()) return {};
    return read_obstacles_file(path);
}

GateLine parse_gate(const std::string& value, const std::string& key) {
    const auto t = split_ws(value);
    if (t.size() != 4)
        throw std::runtime_error("config key '" + key + "' must hold 'x0 y0 x1 y1'");
    return {parse_double(t[0]), parse_double(t[1]), parse_double(t[2]), parse_double(t[3])};
}

int cmd_calibrate(Common& c, const std::string& matches_path) {
    EchoConfig cfg(c.load_config());
    cfg.note("matches_file", matches_path);

    const auto groups = read_matches_file(matches_path);
    if (groups.empty()) throw std::runtime_error(matches_path + ": no point matches");

    std::map<std::uint32_t, RigidTransform> calib;
    std::ostringstream rows;
    for (const auto& [sid, matches] : groups) {
        try {
            const RigidTransform tf = estimate_rigid_transform(matches);
            calib.emplace(sid, tf);
            rows << sid << ' ' << fmt_double(calibration_rmse(tf, matches)) << ' '
                 << matches.size() << "\n";
        } catch (const std::exception& e) {
            c.warn("sensor " + std::to_string(sid) + " not calibrated: " + e.what());
        }
    }
    if (calib.empty()) throw std::runtime_error("no sensor could be calibrated");

    const std::string head = cfg.comment_block("calibrate-sensors", c.seed);
    write_text_file(c.out("calibration.txt"), head + calibration_file_text(calib));
    write_text_file(c.out("rmse.txt"), head + "# sensor_id rmse_m matches\n" + rows.str());
    return c.finish();
}

int cmd_track(Common& c, const std::string& frames_dir) {
    EchoConfig cfg(c.load_config());
    cfg.note("frames_dir", frames_dir);

    CameraIntrinsics cam;
    cam.focal_length_px = cfg.num("camera.focal_px", cam.focal_length_px);
    cam.width = static_cast<int>(cfg.integer("camera.width_px", cam.width));
    cam.height = static_cast<int>(cfg.integer("camera.height_px", cam.height));
    cam.depth_range_max = cfg.num("camera.depth_range_max", cam.depth_range_max);
    cam.validate();

    const std::string calib_path = c.resolve(cfg.text("calibration_file", ""));
    const std::string bg_path = c.resolve(cfg.text("background_file", ""));
    if (calib_path.empty() || bg_path.empty())
        throw std::runtime_error("track needs the calibration_file and background_file keys");
    cfg.note("calibration_file", calib_path);
    cfg.note("background_file", bg_path);
    const auto calib = read_calibration_file(calib_path);
    const BackgroundModel bg = read_background_file(bg_path);

    DetectionConfig dcfg;
    dcfg.cutoff_low = cfg.num("detect.cutoff_low", dcfg.cutoff_low);
    dcfg.cutoff_high = cfg.num("detect.cutoff_high", dcfg.cutoff_high);
    dcfg.sample_size = static_cast<int>(cfg.integer("detect.sample_size", dcfg.sample_size));
    dcfg.linkage_threshold = cfg.num("detect.linkage_threshold", dcfg.linkage_threshold);
    dcfg.min_cluster_points =
        static_cast<int>(cfg.integer("detect.min_cluster_points", dcfg.min_cluster_points));
    dcfg.max_center_distance = cfg.num("detect.max_center_distance", dcfg.max_center_distance);
    dcfg.validate();

    TrackerConfig tcfg;
    tcfg.history_n = static_cast<int>(cfg.integer("track.history_n", tcfg.history_n));
    tcfg.gate_radius = cfg.num("track.gate_radius", tcfg.gate_radius);
    tcfg.max_coast = static_cast<int>(cfg.integer("track.max_coast", tcfg.max_coast));
    tcfg.frame_rate = cfg.num("frame_rate", tcfg.frame_rate);
    tcfg.validate();

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(frames_dir))
        if (entry.path().extension() == ".dpf") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) c.warn(frames_dir + ": no .dpf frames found");

    std::map<std::uint32_t, std::vector<DetectionFrame>> per_sensor;
    std::map<std::uint32_t, int> no_calibration;
    for (const auto& file : files) {
        DepthFrame frame;
        try {
            frame = read_depth_frame(file);
            if (frame.width != cam.width || frame.height != cam.height)
                throw std::runtime_error("frame size differs from camera.width_px/height_px");
        } catch (const std::exception& e) {
            c.warn(file + " skipped: " + e.what());
            continue;
        }
        const auto it = calib.find(frame.sensor_id);
        if (it == calib.end()) {
            ++no_calibration[frame.sensor_id];
            continue;
        }
        const auto world = apply_transform(it->second, back_project(frame, cam));
        auto dets = detect_frame(world, frame.t, frame.sensor_id, bg, dcfg,
                                 derive_seed(c.seed, frame.sensor_id,
                                             std::bit_cast<std::uint64_t>(frame.t)));
        per_sensor[frame.sensor_id].push_back({frame.t, std::move(dets)});
    }
    for (const auto& [sid, n] : no_calibration)
        c.warn(std::to_string(n) + " frames from sensor " + std::to_string(sid) +
               " skipped: sensor missing from " + calib_path);

    for (auto& [sid, dframes] : per_sensor) {
        std::stable_sort(dframes.begin(), dframes.end(),
                         [](const DetectionFrame& a, const DetectionFrame& b) { return a.t < b.t; });
        const TrajectorySet tracks =
            track_sequence(dframes, tcfg, "s" + std::to_string(sid) + "_t");
        auto meta = cfg.metadata("track", c.seed);
        meta["sensor_id"] = std::to_string(sid);
        write_trajectory_file(c.out("tracks_s" + std::to_string(sid) + ".txt"), tracks, meta);
    }
    return c.finish();
}

int cmd_stitch(Common& c, const std::vector<std::string>& inputs) {
    EchoConfig cfg(c.load_config());
    for (std::size_t i = 0; i < inputs.size(); ++i)
        cfg.note("input_" + std::to_string(i), inputs[i]);

    StitchConfig scfg;
    scfg.h_start = cfg.num("stitch.h_start", scfg.h_start);
    scfg.h_step = cfg.num("stitch.h_step", scfg.h_step);
    scfg.h_max = cfg.num("stitch.h_max", scfg.h_max);
    scfg.smoothing_enabled = cfg.flag("stitch.smoothing", scfg.smoothing_enabled);
    scfg.output_rate = cfg.num("stitch.output_rate", scfg.output_rate);
    scfg.seam_overlap_max = cfg.num("stitch.seam_overlap_max", scfg.seam_overlap_max);
    scfg.spline_points_per_knot =
        static_cast<int>(cfg.integer("stitch.spline_points_per_knot", scfg.spline_points_per_knot));
    scfg.validate();

    std::vector<TrajectorySet> sets;
    for (const auto& p : inputs) sets.push_back(read_trajectory_file(p).set);

    TrajectorySet merged = sets.front();
    MatchReport all;
    for (std::size_t k = 1; k < sets.size(); ++k) {
        StitchResult r = iterative_stitch(merged, sets[k], scfg);
        merged = std::move(r.merged);
        all.records.insert(all.records.end(), r.report.records.begin(), r.report.records.end());
    }

    write_trajectory_file(c.out("merged.txt"), merged, cfg.metadata("stitch", c.seed));
    write_text_file(c.out("match_report.txt"),
                    cfg.comment_block("stitch", c.seed) + match_report_text(all));
    return c.finish();
}

int cmd_evaluate(Common& c, const std::string& auto_path, const std::string& truth_path) {
    EchoConfig cfg(c.load_config());
    cfg.note("auto_file", auto_path);
    cfg.note("truth_file", truth_path);
    const double max_dist = cfg.num("eval.max_dist", 0.5);

    const TrajectorySet auto_set = read_trajectory_file(auto_path).set;
    const TrajectorySet truth = read_trajectory_file(truth_path).set;
    const EvalReport report = evaluate(auto_set, truth, max_dist);

    write_text_file(c.out("eval.txt"),
                    cfg.comment_block("evaluate", c.seed) + eval_report_text(report));
    return c.finish();
}

int cmd_fit(Common& c, const std::string& traj_path) {
    EchoConfig cfg(c.load_config());
    cfg.note("input", traj_path);

    const Variant variant = variant_from_name(cfg.text("fit.variant", "A"));

    OptimizerConfig ocfg;
    ocfg.population = static_cast<int>(cfg.integer("fit.population", ocfg.population));
    ocfg.generations = static_cast<int>(cfg.integer("fit.generations", ocfg.generations));
    ocfg.tournament = static_cast<int>(cfg.integer("fit.tournament", ocfg.tournament));
    ocfg.blend_alpha = cfg.num("fit.blend_alpha", ocfg.blend_alpha);
    ocfg.mutation_sigma_frac = cfg.num("fit.mutation_sigma_frac", ocfg.mutation_sigma_frac);
    ocfg.elite = static_cast<int>(cfg.integer("fit.elite", ocfg.elite));
    ocfg.nm_max_iters = static_cast<int>(cfg.integer("fit.nm_max_iters", ocfg.nm_max_iters));
    ocfg.nm_tol = cfg.num("fit.nm_tol", ocfg.nm_tol);
    ocfg.fit_tau = cfg.flag("fit.tau", ocfg.fit_tau);
    ocfg.fit_lambda = cfg.flag("fit.lambda", ocfg.fit_lambda);
    ocfg.validate();

    ObjectiveConfig ccfg;
    ccfg.desired_speed_percentile =
        cfg.num("objective.percentile", ccfg.desired_speed_percentile);
    ccfg.penalty_enabled = cfg.flag("objective.penalty", ccfg.penalty_enabled);
    ccfg.alt_penalty_sign = cfg.flag("objective.alt_penalty_sign", ccfg.alt_penalty_sign);
    ccfg.split_ratio = cfg.num("fit.split_ratio", ccfg.split_ratio);
    ccfg.radius = cfg.num("objective.radius", ccfg.radius);
    ccfg.relaxation_time = cfg.num("objective.relaxation_time", ccfg.relaxation_time);
    ccfg.max_co_ped_gap = cfg.num("objective.max_co_ped_gap", ccfg.max_co_ped_gap);
    ccfg.min_desired_speed = cfg.num("objective.min_desired_speed", ccfg.min_desired_speed);
    ccfg.validate();

    const auto obstacles = load_obstacles(cfg, c);
    const TrajectorySet full = read_trajectory_file(traj_path).set;
    const auto [cal_set, val_set] = split_dataset(full, ccfg.split_ratio, c.seed);

    std::vector<std::string> rejected;
    const auto cal_tasks = make_replay_tasks(cal_set, obstacles, ccfg, &rejected);
    const auto val_tasks = make_replay_tasks(val_set, obstacles, ccfg, &rejected);
    for (const auto& r : rejected) c.warn("replay subject skipped: " + r);
    if (cal_tasks.empty())
        throw std::runtime_error(traj_path + ": no usable calibration subject");

    const FitResult fit = fit_model(cal_tasks, val_tasks, variant, ocfg, ccfg, c.seed);
    if (!fit.warning.empty()) c.warn(fit.warning);

    write_text_file(c.out("fit_" + std::string(variant_name(variant)) + ".txt"),
                    cfg.comment_block("fit", c.seed) + fit_result_text(fit));
    return c.finish();
}

int cmd_validate(Common& c, const std::string& measured_path,
                 const std::vector<std::string>& fit_paths) {
    EchoConfig cfg(c.load_config());
    cfg.note("measured_file", measured_path);

    const std::string entry_txt = cfg.text("gate_entry", "");
    const std::string exit_txt = cfg.text("gate_exit", "");
    if (entry_txt.empty() || exit_txt.empty())
        throw std::runtime_error("validate needs the gate_entry and gate_exit keys");
    const GateLine entry_gate = parse_gate(entry_txt, "gate_entry");
    const GateLine exit_gate = parse_gate(exit_txt, "gate_exit");
    const double alpha = cfg.num("alpha", 0.05);
    const auto obstacles = load_obstacles(cfg, c);

    const TrajectorySet measured = read_trajectory_file(measured_path).set;
    const WalkingTimeCdf measured_cdf = walking_time_cdf(measured, entry_gate, exit_gate);

    const std::string head = cfg.comment_block("validate", c.seed);
    write_text_file(c.out("cdf_measured.txt"), head + cdf_table_text(measured_cdf));

    std::ostringstream rows;
    std::map<std::string, int> name_use;
    for (const auto& fit_path : fit_paths) {
        const FitResult fit = read_fit_result(fit_path);
        std::string name = variant_name(fit.variant);
        if (++name_use[name] > 1) name += std::to_string(name_use[name]);

        std::vector<std::string> rejected;
        const auto tasks = make_replay_tasks(measured, obstacles, fit.objective, &rejected);
        if (!rejected.empty())
            c.warn(std::to_string(rejected.size()) + " replay subjects skipped for " + fit_path);

        TrajectorySet simulated(measured.frame_rate());
        for (const auto& task : tasks) {
            try {
                simulated.add(replay_simulate(task, fit.params, fit.objective));
            } catch (const std::exception& e) {
                c.warn(name + "/" + task.subject.id() + ": simulation failed: " + e.what());
            }
        }

        const WalkingTimeCdf sim_cdf = walking_time_cdf(simulated, entry_gate, exit_gate);
        write_text_file(c.out("cdf_" + name + ".txt"), head + cdf_table_text(sim_cdf));

        try {
            const KsResult ks = ks_two_sample(measured_cdf.times, sim_cdf.times);
            rows << name << ' ' << fmt_double(ks.d) << ' ' << fmt_double(ks.p) << ' '
                 << fmt_double(ks.n_effective) << ' ' << (ks.small_sample ? 1 : 0) << ' '
                 << (ks.p < alpha ? "reject" : "consistent") << "\n";
        } catch (const std::exception& e) {
            c.warn(name + ": no KS verdict: " + e.what());
        }
    }
    write_text_file(c.out("ks.txt"),
                    head + "# variant d p n_effective small_sample verdict\n" + rows.str());
    return c.finish();
}

int cmd_synth(Common& c, const std::string& scene_path, bool seed_given) {
    SyntheticScene scene = read_scene_spec(scene_path);
    if (seed_given) scene.seed = c.seed;
    scene.validate();

    EchoConfig cfg(c.load_config());
    cfg.note("scene_file", scene_path);
    cfg.note("frame_rate", fmt_double(scene.frame_rate));
    cfg.note("duration", fmt_double(scene.duration));
    cfg.note("noise_sigma", fmt_double(scene.noise_sigma));
    cfg.note("camera.focal_px", fmt_double(scene.intrinsics.focal_length_px));
    cfg.note("camera.width_px", std::to_string(scene.intrinsics.width));
    cfg.note("camera.height_px", std::to_string(scene.intrinsics.height));
    cfg.note("camera.depth_range_max", fmt_double(scene.intrinsics.depth_range_max));

    const int n_frames = scene.frame_count();
    for (std::size_t si = 0; si < scene.sensors.size(); ++si) {
        const DepthFrame base = render_walls(scene, si);
        for (int k = 0; k < n_frames; ++k) {
            const DepthFrame frame = render_depth(scene, si, scene.frame_time(k), &base);
            char name[64];
            std::snprintf(name, sizeof(name), "s%u_f%05d.dpf", scene.sensors[si].id, k);
            write_depth_frame(c.out(name), frame);
        }
    }

    const GroundTruth truth = ground_truth(scene);
    auto meta = cfg.metadata("synth", scene.seed);
    write_trajectory_file(c.out("truth_global.txt"), truth.global, meta);
    for (std::size_t si = 0; si < scene.sensors.size(); ++si) {
        auto m = meta;
        m["sensor_id"] = std::to_string(scene.sensors[si].id);
        write_trajectory_file(c.out("truth_s" + std::to_string(scene.sensors[si].id) + ".txt"),
                              truth.per_sensor[si], m);
    }

    std::map<std::uint32_t, RigidTransform> calib;
    for (const auto& s : scene.sensors) calib.emplace(s.id, s.pose);
    const std::string head = cfg.comment_block("synth", scene.seed);
    write_text_file(c.out("calibration.txt"), head + calibration_file_text(calib));

    std::ostringstream bg_rows;
    for (const auto& b : scene_background(scene).boxes)
        bg_rows << fmt_double(b.min.x) << ' ' << fmt_double(b.min.y) << ' ' << fmt_double(b.min.z)
                << ' ' << fmt_double(b.max.x) << ' ' << fmt_double(b.max.y) << ' '
                << fmt_double(b.max.z) << "\n";
    write_text_file(c.out("background.txt"), head + bg_rows.str());

    write_scene_spec(c.out("scene.txt"), scene);

    // Ready-to-use config for the track command over this dataset.
    std::ostringstream run;
    run << "# command = synth\n# scene_file = " << scene_path << "\n";
    run << "camera.focal_px = " << fmt_double(scene.intrinsics.focal_length_px) << "\n";
    run << "camera.width_px = " << scene.intrinsics.width << "\n";
    run << "camera.height_px = " << scene.intrinsics.height << "\n";
    run << "camera.depth_range_max = " << fmt_double(scene.intrinsics.depth_range_max) << "\n";
    run << "frame_rate = " << fmt_double(scene.frame_rate) << "\n";
    run << "duration = " << fmt_double(scene.duration) << "\n";
    run << "noise_sigma = " << fmt_double(scene.noise_sigma) << "\n";
    run << "seed = " << scene.seed << "\n";
    run << "calibration_file = calibration.txt\n";
    run << "background_file = background.txt\n";
    write_text_file(c.out("run.conf"), run.str());
    return c.finish();
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"crowdkit: pedestrian trajectories from ceiling depth sensors and "
                 "social-force model calibration"};
    app.require_subcommand(1);

    Common c;
    std::string matches_path, frames_dir, auto_path, truth_path, traj_path, measured_path,
        scene_path;
    std::vector<std::string> stitch_inputs, fit_paths;

    auto* cal = app.add_subcommand("calibrate-sensors",
                                   "Estimate sensor-to-world poses from point matches");
    cal->add_option("matches", matches_path, "Match file: sensor_id wx wy wz cx cy cz per line")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(cal, c);

    auto* track = app.add_subcommand("track", "Detect and track pedestrians in depth frames");
    track->add_option("frames", frames_dir, "Directory of .dpf depth frames")
        ->required()
        ->check(CLI::ExistingDirectory);
    add_common(track, c);

    auto* stitch = app.add_subcommand("stitch", "Merge per-sensor trajectory fragments");
    stitch->add_option("inputs", stitch_inputs, "Trajectory files, one per sensor")
        ->required()
        ->expected(1, -1)
        ->check(CLI::ExistingFile);
    add_common(stitch, c);

    auto* eval = app.add_subcommand("evaluate", "Score trajectories against ground truth");
    eval->add_option("auto", auto_path, "Automatically produced trajectory file")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("truth", truth_path, "Ground-truth trajectory file")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(eval, c);

    auto* fit = app.add_subcommand("fit", "Calibrate a social-force variant by replay");
    fit->add_option("trajectories", traj_path, "Observed trajectory file")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(fit, c);

    auto* validate = app.add_subcommand("validate",
                                        "Compare measured and simulated walking times");
    validate->add_option("measured", measured_path, "Measured trajectory file")
        ->required()
        ->check(CLI::ExistingFile);
    validate->add_option("--fit", fit_paths, "Fit result file (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(validate, c);

    auto* synth = app.add_subcommand("synth", "Render a synthetic depth dataset with truth");
    synth->add_option("scene", scene_path, "Scene description file")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(synth, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*cal) return cmd_calibrate(c, matches_path);
        if (*track) return cmd_track(c, frames_dir);
        if (*stitch) return cmd_stitch(c, stitch_inputs);
        if (*eval) return cmd_evaluate(c, auto_path, truth_path);
        if (*fit) return cmd_fit(c, traj_path);
        if (*validate) return cmd_validate(c, measured_path, fit_paths);
        if (*synth) return cmd_synth(c, scene_path, synth->count("--seed") > 0);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace crowdkit
