#include "crowdkit/calibration/replay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crowdkit/common/textio.hpp"
#include "crowdkit/core/kinematics.hpp"

namespace crowdkit {

void ObjectiveConfig::validate() const {
    if (!(desired_speed_percentile > 0.0 && desired_speed_percentile <= 100.0))
        throw std::invalid_argument("ObjectiveConfig: percentile must lie in (0, 100]");
    if (!(split_ratio > 0.0 && split_ratio < 1.0))
        throw std::invalid_argument("ObjectiveConfig: split_ratio must lie in (0, 1)");
    if (!(radius > 0.0)) throw std::invalid_argument("ObjectiveConfig: radius must be positive");
    if (!(relaxation_time > 0.0))
        throw std::invalid_argument("ObjectiveConfig: relaxation_time must be positive");
    if (!(max_co_ped_gap > 0.0))
        throw std::invalid_argument("ObjectiveConfig: max_co_ped_gap must be positive");
    if (!(min_desired_speed > 0.0))
        throw std::invalid_argument("ObjectiveConfig: min_desired_speed must be positive");
}

double estimate_desired_speed(const Trajectory& traj, double percentile) {
    const auto speeds = smoothed_speeds(traj, 5);
    return percentile_nearest_rank(speeds, percentile);
}

void ReplayTask::validate(const ObjectiveConfig& cfg) const {
    if (subject.size() < 2) throw std::invalid_argument("ReplayTask: subject needs >= 2 points");
    if (!(t_in < t_out)) throw std::invalid_argument("ReplayTask: empty replay window");
    if (!(desired_speed >= cfg.min_desired_speed))
        throw std::invalid_argument("ReplayTask: subject '" + subject.id() +
                                    "' is nearly stationary");
    for (const auto& co : co_pedestrians) {
        const auto& pts = co.points();
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            const double gap = pts[k + 1].t - pts[k].t;
            if (gap > cfg.max_co_ped_gap && pts[k + 1].t > t_in && pts[k].t < t_out)
                throw std::invalid_argument("ReplayTask: co-pedestrian '" + co.id() + "' has a " +
                                            fmt_double(gap) + " s gap inside the replay window");
        }
    }
}

ReplayTask make_replay_task(const TrajectorySet& set, std::size_t subject_index,
                            const std::vector<Obstacle>& obstacles, const ObjectiveConfig& cfg) {
    cfg.validate();
    if (subject_index >= set.size())
        throw std::out_of_range("make_replay_task: subject index out of range");
    const Trajectory& subject = set[subject_index];
    if (subject.size() < 2)
        throw std::invalid_argument("ReplayTask: subject '" + subject.id() +
                                    "' needs >= 2 points");
    const double t_in = subject.front().t;
    const double t_out = subject.back().t;

    std::vector<Trajectory> co;
    for (std::size_t j = 0; j < set.size(); ++j) {
        if (j == subject_index) continue;
        const Trajectory& other = set[j];
        if (other.back().t >= t_in && other.front().t <= t_out) co.push_back(other);
    }

    ReplayTask task{subject, std::move(co), obstacles, t_in, t_out,
                    estimate_desired_speed(subject, cfg.desired_speed_percentile)};
    task.validate(cfg);
    return task;
}

std::vector<ReplayTask> make_replay_tasks(const TrajectorySet& set,
                                          const std::vector<Obstacle>& obstacles,
                                          const ObjectiveConfig& cfg,
                                          std::vector<std::string>* rejected) {
    std::vector<ReplayTask> tasks;
    for (std::size_t i = 0; i < set.size(); ++i) {
        try {
            tasks.push_back(make_replay_task(set, i, obstacles, cfg));
        } catch (const std::exception& e) {
            if (rejected) rejected->push_back(set[i].id() + ": " + e.what());
        }
    }
    return tasks;
}

bool sample_observed(const Trajectory& traj, double t, Vec2* position, Vec2* velocity) {
    const auto& pts = traj.points();
    if (t < pts.front().t || t > pts.back().t) return false;
    // Segment [k, k+1] containing t: first point strictly past t, minus one.
    const auto it = std::upper_bound(pts.begin(), pts.end(), t,
                                     [](double v, const TrajectoryPoint& p) { return v < p.t; });
    std::size_t k = it == pts.begin() ? 0 : static_cast<std::size_t>(it - pts.begin()) - 1;
    if (pts.size() >= 2 && k + 1 >= pts.size()) k = pts.size() - 2;
    const auto& p0 = pts[k];
    const auto& p1 = pts[std::min(k + 1, pts.size() - 1)];
    const double span = p1.t - p0.t;
    if (span <= 0.0) {
        if (position) *position = {p0.position.x, p0.position.y};
        if (velocity) *velocity = {0.0, 0.0};
        return true;
    }
    const double u = (t - p0.t) / span;
    if (position)
        *position = {p0.position.x + u * (p1.position.x - p0.position.x),
                     p0.position.y + u * (p1.position.y - p0.position.y)};
    if (velocity)
        *velocity = {(p1.position.x - p0.position.x) / span,
                     (p1.position.y - p0.position.y) / span};
    return true;
}

Trajectory replay_simulate(const ReplayTask& task, const ModelParams& params,
                           const ObjectiveConfig& cfg) {
    cfg.validate();
    task.validate(cfg);
    ModelParams p = params;
    p.validate();

    const auto& obs_pts = task.subject.points();
    Agent subject;
    subject.id = task.subject.id();
    subject.position = {obs_pts.front().position.x, obs_pts.front().position.y};
    subject.goal = {obs_pts.back().position.x, obs_pts.back().position.y};
    subject.desired_speed = task.desired_speed;
    subject.radius = cfg.radius;
    subject.relaxation_time = cfg.relaxation_time;
    subject.velocity =
        task.desired_speed * normalized_or(subject.goal - subject.position, Vec2{1.0, 0.0});
    subject.validate();

    std::vector<TrajectoryPoint> out;
    out.reserve(obs_pts.size());
    out.push_back(obs_pts.front());

    std::vector<Agent> neighbors;
    neighbors.reserve(task.co_pedestrians.size());
    for (std::size_t i = 1; i < obs_pts.size(); ++i) {
        const double t_prev = obs_pts[i - 1].t;
        const double dt = obs_pts[i].t - t_prev;
        p.dt = dt;

        neighbors.clear();
        for (const auto& co : task.co_pedestrians) {
            Vec2 pos, vel;
            if (!sample_observed(co, t_prev, &pos, &vel)) continue;
            Agent b;
            b.id = co.id();
            b.position = pos;
            b.velocity = vel;
            b.goal = pos;
            b.radius = cfg.radius;
            neighbors.push_back(std::move(b));
        }

        const Vec2 f = total_force(subject, neighbors, task.obstacles, p);
        if (!f.finite())
            throw std::runtime_error("replay_simulate: non-finite force for subject '" +
                                     task.subject.id() + "' at t = " + fmt_double(t_prev));
        subject.velocity += dt * f;
        const double cap = kSpeedCapFactor * subject.desired_speed;
        const double speed = norm(subject.velocity);
        if (speed > cap) subject.velocity = (cap / speed) * subject.velocity;
        subject.position += dt * subject.velocity;

        out.push_back({obs_pts[i].t,
                       {subject.position.x, subject.position.y, obs_pts[i].position.z}});
    }
    return Trajectory(task.subject.id(), std::move(out));
}

double trajectory_distance(const Trajectory& observed, const Trajectory& simulated) {
    const auto& a = observed.points();
    const auto& b = simulated.points();
    if (a.size() != b.size())
        throw std::invalid_argument("trajectory_distance: point counts differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i].t - b[i].t) > 1e-9)
            throw std::invalid_argument("trajectory_distance: timestamps differ at index " +
                                        std::to_string(i));
        sum += horizontal_distance(a[i].position, b[i].position);
    }
    return sum / static_cast<double>(a.size());
}

double overlap_penalty(const Trajectory& simulated, const std::vector<Trajectory>& co_pedestrians,
                       const ObjectiveConfig& cfg) {
    if (co_pedestrians.empty()) return 0.0;
    const double contact = 2.0 * cfg.radius;
    double total = 0.0;
    for (const auto& co : co_pedestrians) {
        double worst = 0.0;
        for (const auto& sp : simulated.points()) {
            Vec2 pos;
            if (!sample_observed(co, sp.t, &pos, nullptr)) continue;
            const double dx = sp.position.x - pos.x;
            const double dy = sp.position.y - pos.y;
            const double d = std::max(std::sqrt(dx * dx + dy * dy), 1e-9);
            const double term =
                cfg.alt_penalty_sign ? 1.0 / d + 1.0 / contact : 1.0 / d - 1.0 / contact;
            worst = std::max(worst, term);
        }
        total += worst;
    }
    return total / static_cast<double>(co_pedestrians.size());
}

double similarity(const std::vector<ReplayTask>& tasks, const ModelParams& params,
                  const ObjectiveConfig& cfg, std::vector<TaskOutcome>* outcomes) {
    if (tasks.empty()) throw std::invalid_argument("similarity: no tasks");
    double sum = 0.0;
    int succeeded = 0;
    for (const auto& task : tasks) {
        TaskOutcome outcome;
        outcome.subject_id = task.subject.id();
        try {
            const Trajectory sim = replay_simulate(task, params, cfg);
            outcome.distance = trajectory_distance(task.subject, sim);
            outcome.penalty =
                cfg.penalty_enabled ? overlap_penalty(sim, task.co_pedestrians, cfg) : 0.0;
            outcome.contribution = outcome.distance / (task.t_out - task.t_in) + outcome.penalty;
            outcome.ok = true;
            sum += outcome.contribution;
            ++succeeded;
        } catch (const std::exception& e) {
            outcome.error = e.what();
        }
        if (outcomes) outcomes->push_back(std::move(outcome));
    }
    if (succeeded == 0)
        throw std::runtime_error("similarity: all " + std::to_string(tasks.size()) +
                                 " tasks failed");
    return sum / static_cast<double>(succeeded);
}

}  // namespace crowdkit
