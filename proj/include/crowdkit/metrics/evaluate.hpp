#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crowdkit/core/types.hpp"
#include "crowdkit/stitching/stitch.hpp"

namespace crowdkit {

// Discrete Fréchet distance over the horizontal (x, y) positions, via
// dynamic programming over monotone couplings.
double discrete_frechet(const Trajectory& a, const Trajectory& b);

struct MatchedPair {
    int auto_index = -1;
    int truth_index = -1;
    double frechet = 0.0;
    int steps = 0;  // ground-truth point count; weights the MOTP average
};

struct MatchResult {
    std::vector<MatchedPair> pairs;
    std::vector<int> unmatched_auto;   // false positives
    std::vector<int> unmatched_truth;  // false negatives / misses
};

// Optimal one-to-one pairing minimizing summed Fréchet distance; pairs above
// max_dist are forbidden. Solved as an assignment problem with per-
// trajectory null options priced at max_dist.
MatchResult match_to_ground_truth(const TrajectorySet& auto_set, const TrajectorySet& truth,
                                  double max_dist);

// Duration-weighted mean of per-pair Fréchet distances: sum(d_i * steps_i) /
// sum(steps_i).
double motp(const std::vector<MatchedPair>& pairs);

double pdr(int true_positives, int false_negatives);

// Fraction of ground-truth seam pairs reproduced by accepted match records
// (unordered id comparison).
double stitch_tpr(const MatchReport& report,
                  const std::vector<std::pair<std::string, std::string>>& truth_pairs);

struct EvalReport {
    double motp = 0.0;
    double pdr = 0.0;
    int true_positives = 0;
    int false_negatives = 0;
    int false_positives = 0;
    double max_dist = 0.0;
    std::vector<MatchedPair> pairs;
    std::vector<std::string> pair_auto_ids;
    std::vector<std::string> pair_truth_ids;
};

EvalReport evaluate(const TrajectorySet& auto_set, const TrajectorySet& truth,
                    double max_dist = 0.5);

std::string eval_report_text(const EvalReport& report);

}  // namespace crowdkit
