#pragma once

#include <string>
#include <vector>

#include "crowdkit/core/types.hpp"
#include "crowdkit/socialforce/model.hpp"

namespace crowdkit {

struct ObjectiveConfig {
    double desired_speed_percentile = 90.0;
    bool penalty_enabled = true;
    // Comparison mode: additive sign in the overlap term, which makes the
    // penalty nonzero even for well-separated agents. Off by default.
    bool alt_penalty_sign = false;
    double split_ratio = 424.0 / 558.0;
    double radius = 0.25;            // m, shared pedestrian body radius
    double relaxation_time = 0.5;    // s
    double max_co_ped_gap = 0.5;     // s, longest tolerated hole in a co-pedestrian record
    double min_desired_speed = 0.05; // m/s, subjects slower than this are not usable

    void validate() const;
};

// 90th-percentile (by default) of the smoothed finite-difference speeds.
double estimate_desired_speed(const Trajectory& traj, double percentile);

// One pedestrian to re-simulate against everyone else played back as
// recorded. Built by make_replay_task, which extracts the window, the
// desired speed, and the co-pedestrians overlapping the window.
struct ReplayTask {
    Trajectory subject;
    std::vector<Trajectory> co_pedestrians;
    std::vector<Obstacle> obstacles;
    double t_in = 0.0;
    double t_out = 0.0;
    double desired_speed = 0.0;

    void validate(const ObjectiveConfig& cfg) const;
};

ReplayTask make_replay_task(const TrajectorySet& set, std::size_t subject_index,
                            const std::vector<Obstacle>& obstacles, const ObjectiveConfig& cfg);

// Builds one task per trajectory; unusable subjects (too short, nearly
// stationary, co-pedestrian record gaps) are skipped and noted in rejected.
std::vector<ReplayTask> make_replay_tasks(const TrajectorySet& set,
                                          const std::vector<Obstacle>& obstacles,
                                          const ObjectiveConfig& cfg,
                                          std::vector<std::string>* rejected = nullptr);

// Linear interpolation of an observed trajectory at time t (horizontal
// position and segment velocity). False outside the recorded span.
bool sample_observed(const Trajectory& traj, double t, Vec2* position, Vec2* velocity);

// Integrates the subject through the observed timestamps: start position,
// initial velocity of magnitude desired_speed toward the goal (the observed
// end point), co-pedestrians interpolated from their recordings. Output has
// the subject's timestamps and point count.
Trajectory replay_simulate(const ReplayTask& task, const ModelParams& params,
                           const ObjectiveConfig& cfg);

// Mean horizontal separation of two equal-length, equally-timed trajectories.
double trajectory_distance(const Trajectory& observed, const Trajectory& simulated);

// Per co-pedestrian, the worst instantaneous overlap term
// max(0, 1/d - 1/(r_a + r_b)) along the simulated trajectory; averaged over
// the co-pedestrian count. Zero when nobody ever gets closer than contact.
double overlap_penalty(const Trajectory& simulated, const std::vector<Trajectory>& co_pedestrians,
                       const ObjectiveConfig& cfg);

struct TaskOutcome {
    std::string subject_id;
    bool ok = false;
    double distance = 0.0;
    double penalty = 0.0;
    double contribution = 0.0;
    std::string error;
};

// Mean over tasks of d / (t_out - t_in) + overlap penalty; 0 is a perfect
// score. Failing tasks are excluded from the mean and reported through
// outcomes; throws only when no task succeeds at all.
double similarity(const std::vector<ReplayTask>& tasks, const ModelParams& params,
                  const ObjectiveConfig& cfg, std::vector<TaskOutcome>* outcomes = nullptr);

}  // namespace crowdkit
