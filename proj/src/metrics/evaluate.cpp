#include "crowdkit/metrics/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "crowdkit/common/textio.hpp"
#include "crowdkit/stitching/hungarian.hpp"

namespace crowdkit {

double discrete_frechet(const Trajectory& a, const Trajectory& b) {
    const auto& pa = a.points();
    const auto& pb = b.points();
    const std::size_t n = pa.size();
    const std::size_t m = pb.size();

    auto d = [&](std::size_t i, std::size_t j) {
        return horizontal_distance(pa[i].position, pb[j].position);
    };

    // Row-rolling DP over the coupling lattice.
    std::vector<double> prev(m), cur(m);
    prev[0] = d(0, 0);
    for (std::size_t j = 1; j < m; ++j) prev[j] = std::max(prev[j - 1], d(0, j));
    for (std::size_t i = 1; i < n; ++i) {
        cur[0] = std::max(prev[0], d(i, 0));
        for (std::size_t j = 1; j < m; ++j)
            cur[j] = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), d(i, j));
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

MatchResult match_to_ground_truth(const TrajectorySet& auto_set, const TrajectorySet& truth,
                                  double max_dist) {
    if (!(max_dist > 0.0)) throw std::invalid_argument("match_to_ground_truth: max_dist must be positive");
    const int na = static_cast<int>(auto_set.size());
    const int nt = static_cast<int>(truth.size());

    MatchResult result;
    if (na == 0 || nt == 0) {
        for (int i = 0; i < na; ++i) result.unmatched_auto.push_back(i);
        for (int j = 0; j < nt; ++j) result.unmatched_truth.push_back(j);
        return result;
    }

    // Square (na+nt) assignment: the top-left block holds real pair costs
    // (forbidden pairs priced out), each trajectory owns one null slot priced
    // at max_dist, and the null-null block is free. A real pair is then
    // chosen exactly when it beats leaving both sides unmatched.
    const double forbidden = 1e9;
    const int n = na + nt;
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, forbidden));
    std::vector<std::vector<double>> frechet(na, std::vector<double>(nt, 0.0));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nt; ++j) {
            frechet[i][j] = discrete_frechet(auto_set[i], truth[j]);
            cost[i][j] = frechet[i][j] <= max_dist ? frechet[i][j] : forbidden;
        }
    for (int i = 0; i < na; ++i) cost[i][nt + i] = max_dist;
    for (int j = 0; j < nt; ++j) cost[na + j][j] = max_dist;
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < na; ++j) cost[na + i][nt + j] = 0.0;

    const auto assignment = hungarian_assign(cost);
    std::vector<bool> truth_matched(nt, false);
    for (int i = 0; i < na; ++i) {
        const int j = assignment[i];
        if (j < nt && frechet[i][j] <= max_dist) {
            result.pairs.push_back(
                {i, j, frechet[i][j], static_cast<int>(truth[j].size())});
            truth_matched[j] = true;
        } else {
            result.unmatched_auto.push_back(i);
        }
    }
    for (int j = 0; j < nt; ++j)
        if (!truth_matched[j]) result.unmatched_truth.push_back(j);
    return result;
}

double motp(const std::vector<MatchedPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("motp: no matched pairs");
    double num = 0.0;
    double den = 0.0;
    for (const auto& p : pairs) {
        num += p.frechet * p.steps;
        den += p.steps;
    }
    if (!(den > 0.0)) throw std::invalid_argument("motp: zero total duration");
    return num / den;
}

double pdr(int true_positives, int false_negatives) {
    if (true_positives < 0 || false_negatives < 0)
        throw std::invalid_argument("pdr: negative counts");
    const int den = true_positives + false_negatives;
    if (den == 0) throw std::invalid_argument("pdr: no ground-truth trajectories");
    return static_cast<double>(true_positives) / den;
}

double stitch_tpr(const MatchReport& report,
                  const std::vector<std::pair<std::string, std::string>>& truth_pairs) {
    if (truth_pairs.empty()) throw std::invalid_argument("stitch_tpr: empty truth");
    const auto accepted = report.accepted();
    int hits = 0;
    for (const auto& tp : truth_pairs) {
        bool found = false;
        for (const auto& r : accepted)
            if ((r.id_a == tp.first && r.id_b == tp.second) ||
                (r.id_a == tp.second && r.id_b == tp.first)) {
                found = true;
                break;
            }
        if (found) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(truth_pairs.size());
}

EvalReport evaluate(const TrajectorySet& auto_set, const TrajectorySet& truth, double max_dist) {
    const MatchResult match = match_to_ground_truth(auto_set, truth, max_dist);
    EvalReport report;
    report.max_dist = max_dist;
    report.pairs = match.pairs;
    report.true_positives = static_cast<int>(match.pairs.size());
    report.false_negatives = static_cast<int>(match.unmatched_truth.size());
    report.false_positives = static_cast<int>(match.unmatched_auto.size());
    if (!match.pairs.empty()) report.motp = motp(match.pairs);
    if (report.true_positives + report.false_negatives > 0)
        report.pdr = pdr(report.true_positives, report.false_negatives);
    for (const auto& p : match.pairs) {
        report.pair_auto_ids.push_back(auto_set[p.auto_index].id());
        report.pair_truth_ids.push_back(truth[p.truth_index].id());
    }
    return report;
}

std::string eval_report_text(const EvalReport& report) {
    std::ostringstream os;
    os << "motp_m: " << fmt_double(report.motp) << "\n";
    os << "pdr: " << fmt_double(report.pdr) << "\n";
    os << "true_positives: " << report.true_positives << "\n";
    os << "false_negatives: " << report.false_negatives << "\n";
    os << "false_positives: " << report.false_positives << "\n";
    os << "max_dist_m: " << fmt_double(report.max_dist) << "\n";
    os << "motp_weighting: per-pair Frechet distances weighted by ground-truth point count\n";
    os << "# auto_id truth_id frechet_m steps\n";
    for (std::size_t k = 0; k < report.pairs.size(); ++k)
        os << report.pair_auto_ids[k] << ' ' << report.pair_truth_ids[k] << ' '
           << fmt_double(report.pairs[k].frechet) << ' ' << report.pairs[k].steps << "\n";
    return os.str();
}

}  // namespace crowdkit
