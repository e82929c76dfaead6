#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "crowdkit/calibration/replay.hpp"
#include "crowdkit/core/types.hpp"
#include "crowdkit/socialforce/model.hpp"

namespace crowdkit {

struct OptimizerConfig {
    int population = 40;
    int generations = 60;
    int tournament = 3;
    double blend_alpha = 0.5;        // BLX crossover expansion
    double mutation_sigma_frac = 0.05;  // Gaussian sigma as a fraction of each range
    int elite = 2;
    int nm_max_iters = 300;
    double nm_tol = 1e-10;           // relative value-spread stop for Nelder-Mead
    bool fit_tau = false;            // co-fit the relaxation time
    bool fit_lambda = false;         // co-fit the anisotropy floor (variants A/B)

    void validate() const;
};

// Box bounds for the free parameters of one variant, in optimizer order.
struct ParamBounds {
    std::vector<std::string> names;
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t size() const { return names.size(); }
};

ParamBounds parameter_bounds(Variant variant, const OptimizerConfig& ocfg);

// Writes an optimizer vector into a params/config pair (tau rides on the
// objective config, everything else on the model params).
void apply_parameter_vector(const std::vector<double>& x, const ParamBounds& bounds,
                            ModelParams* params, ObjectiveConfig* cfg);
std::vector<double> extract_parameter_vector(const ParamBounds& bounds, const ModelParams& params,
                                             const ObjectiveConfig& cfg);

struct FitResult {
    Variant variant = Variant::A;
    ModelParams params;
    double relaxation_time = 0.5;
    double s_cal = 0.0;
    double s_val = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> trace;  // best objective per generation
    std::string warning;
    int calibration_task_count = 0;
    int validation_task_count = 0;
    int failed_calibration_tasks = 0;
    int failed_validation_tasks = 0;
    OptimizerConfig optimizer;
    ObjectiveConfig objective;
};

// Genetic algorithm over the bounded parameter box, refined by Nelder-Mead
// from the best individual; deterministic for a given seed. s_val comes from
// scoring the final parameters on the validation tasks.
FitResult fit_model(const std::vector<ReplayTask>& calibration,
                    const std::vector<ReplayTask>& validation, Variant variant,
                    const OptimizerConfig& ocfg, const ObjectiveConfig& ccfg, std::uint64_t seed);

// Seeded disjoint partition; the first set receives round(ratio * n)
// trajectories. Both halves keep the input ordering.
std::pair<TrajectorySet, TrajectorySet> split_dataset(const TrajectorySet& set, double ratio,
                                                      std::uint64_t seed);

std::string fit_result_text(const FitResult& fit);
FitResult fit_result_from_lines(const std::vector<std::string>& lines);
FitResult read_fit_result(const std::string& path);
void write_fit_result(const std::string& path, const FitResult& fit);

// Generic Nelder-Mead minimizer over a box: candidate points are clamped
// into the bounds before evaluation and the best clamped point ever
// evaluated is returned. Exposed for direct testing against analytic optima.
std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x0,
    const ParamBounds& bounds, int max_iters, double tol);

}  // namespace crowdkit
