#pragma once

// Reference implementations used only by the test suites. Each one is
// written from the textbook definition, independently of the production
// code, and deliberately favors obviousness over speed: exhaustive
// enumeration and naive recomputation wherever feasible. Production results
// are checked against these on randomized cases.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "crowdkit/core/types.hpp"

namespace oracle {

inline double xy_dist(const crowdkit::Point3& a, const crowdkit::Point3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// --- Discrete Fréchet distance ---------------------------------------------

// Memoized textbook recursion: c(i, j) = max(d(i, j),
// min(c(i-1, j), c(i, j-1), c(i-1, j-1))).
inline double frechet_recursive(const std::vector<crowdkit::Point3>& p,
                                const std::vector<crowdkit::Point3>& q) {
    const std::size_t n = p.size(), m = q.size();
    std::vector<std::vector<double>> memo(n, std::vector<double>(m, -1.0));
    auto c = [&](auto&& self, std::size_t i, std::size_t j) -> double {
        if (memo[i][j] >= 0.0) return memo[i][j];
        const double d = xy_dist(p[i], q[j]);
        double best;
        if (i == 0 && j == 0) {
            best = d;
        } else if (i == 0) {
            best = std::max(d, self(self, 0, j - 1));
        } else if (j == 0) {
            best = std::max(d, self(self, i - 1, 0));
        } else {
            best = std::max(d, std::min({self(self, i - 1, j), self(self, i, j - 1),
                                         self(self, i - 1, j - 1)}));
        }
        memo[i][j] = best;
        return best;
    };
    return c(c, n - 1, m - 1);
}

// Exhaustive enumeration of every monotone coupling (tiny inputs only):
// walk from (0, 0) to (n-1, m-1) advancing one or both indices, track the
// longest leash along the way, minimize over walks.
inline double frechet_enumerate(const std::vector<crowdkit::Point3>& p,
                                const std::vector<crowdkit::Point3>& q) {
    const std::size_t n = p.size(), m = q.size();
    double best = std::numeric_limits<double>::infinity();
    auto walk = [&](auto&& self, std::size_t i, std::size_t j, double leash) -> void {
        leash = std::max(leash, xy_dist(p[i], q[j]));
        if (leash >= best) return;
        if (i == n - 1 && j == m - 1) {
            best = leash;
            return;
        }
        if (i + 1 < n) self(self, i + 1, j, leash);
        if (j + 1 < m) self(self, i, j + 1, leash);
        if (i + 1 < n && j + 1 < m) self(self, i + 1, j + 1, leash);
    };
    walk(walk, 0, 0, 0.0);
    return best;
}

// --- Assignment problem -----------------------------------------------------

// Minimal total cost over all n! permutations (n <= ~8).
inline double assignment_brute_force(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += cost[i][static_cast<std::size_t>(perm[i])];
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// --- Complete-linkage clustering --------------------------------------------

// Naive agglomeration: every cluster distance is recomputed from the raw
// points as the maximum pairwise member distance (full 3-D distance); the
// closest pair merges while it is below the threshold.
inline std::vector<std::vector<int>> complete_linkage_brute_force(
    const std::vector<crowdkit::Point3>& pts, double threshold) {
    auto dist3 = [](const crowdkit::Point3& a, const crowdkit::Point3& b) {
        const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    };
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) clusters.push_back({i});
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double worst = 0.0;
                for (int a : clusters[i])
                    for (int b : clusters[j])
                        worst = std::max(worst,
                                         dist3(pts[static_cast<std::size_t>(a)],
                                               pts[static_cast<std::size_t>(b)]));
                if (worst < best) {
                    best = worst;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best >= threshold) break;
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return clusters;
}

// Order-independent form for comparing partitions.
inline std::set<std::set<int>> normalize_partition(const std::vector<std::vector<int>>& clusters) {
    std::set<std::set<int>> out;
    for (const auto& c : clusters) out.insert(std::set<int>(c.begin(), c.end()));
    return out;
}

// --- Two-sample Kolmogorov-Smirnov ------------------------------------------

// D by direct evaluation of both empirical CDFs at every pooled value.
inline double ks_statistic_brute_force(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    double d = 0.0;
    for (double x : pooled) {
        const double fa =
            static_cast<double>(std::upper_bound(a.begin(), a.end(), x) - a.begin()) /
            static_cast<double>(a.size());
        const double fb =
            static_cast<double>(std::upper_bound(b.begin(), b.end(), x) - b.begin()) /
            static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

// Kolmogorov survival via the theta-function dual of the alternating series:
// P(K <= x) = sqrt(2 pi) / x * sum_{k odd} exp(-k^2 pi^2 / (8 x^2)). The two
// expansions converge from opposite ends of the range, which makes this a
// genuinely independent cross-check of the p-value.
inline double kolmogorov_tail_dual(double lambda) {
    if (lambda <= 0.0) return 1.0;
    const double pi = std::acos(-1.0);
    double cdf = 0.0;
    for (int k = 1; k < 200000; k += 2) {
        const double term = std::exp(-static_cast<double>(k) * k * pi * pi / (8.0 * lambda * lambda));
        cdf += term;
        if (term < 1e-17 && k > 5) break;
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    const double q = 1.0 - cdf;
    return std::min(1.0, std::max(0.0, q));
}

}  // namespace oracle
