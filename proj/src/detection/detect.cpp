#include "crowdkit/detection/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "crowdkit/common/rng.hpp"

namespace crowdkit {

void DetectionConfig::validate() const {
    if (!(cutoff_low > 0.0) || !(cutoff_low < cutoff_high))
        throw std::invalid_argument("detection cutoffs must satisfy 0 < low < high");
    if (sample_size < 1) throw std::invalid_argument("sample_size must be >= 1");
    if (!(linkage_threshold > 0.0)) throw std::invalid_argument("linkage_threshold must be positive");
    if (min_cluster_points < 1) throw std::invalid_argument("min_cluster_points must be >= 1");
    if (!(max_center_distance > 0.0))
        throw std::invalid_argument("max_center_distance must be positive");
}

std::vector<Point3> subtract_background(const std::vector<Point3>& points,
                                        const BackgroundModel& bg) {
    std::vector<Point3> out;
    out.reserve(points.size());
    for (const auto& p : points)
        if (!bg.contains(p)) out.push_back(p);
    return out;
}

std::vector<Point3> height_cutoff(const std::vector<Point3>& points, const DetectionConfig& cfg) {
    std::vector<Point3> out;
    out.reserve(points.size());
    for (const auto& p : points)
        if (p.z >= cfg.cutoff_low && p.z <= cfg.cutoff_high) out.push_back(p);
    return out;
}

namespace {

double dist3(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Uniform subsample of size k without replacement, drawn from indices put
// into canonical (lexicographic) order first so the draw does not depend on
// input permutation.
std::vector<int> canonical_sample(const std::vector<Point3>& points, int k, std::uint64_t seed) {
    std::vector<int> ord(points.size());
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
        const Point3& pa = points[a];
        const Point3& pb = points[b];
        if (pa.x != pb.x) return pa.x < pb.x;
        if (pa.y != pb.y) return pa.y < pb.y;
        return pa.z < pb.z;
    });
    Rng rng(seed);
    const auto n = static_cast<std::uint64_t>(ord.size());
    for (int i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.uniform_index(n - static_cast<std::uint64_t>(i));
        std::swap(ord[i], ord[j]);
    }
    ord.resize(k);
    return ord;
}

}  // namespace

std::vector<std::vector<int>> complete_linkage_cluster(const std::vector<Point3>& points,
                                                       const DetectionConfig& cfg,
                                                       std::uint64_t seed) {
    cfg.validate();
    if (points.empty()) throw std::invalid_argument("complete_linkage_cluster: no points");

    const int m = static_cast<int>(std::min<std::size_t>(cfg.sample_size, points.size()));
    const std::vector<int> sample = canonical_sample(points, m, seed);
    if (m == 1) return {{sample[0]}};

    // Pairwise distances between sampled points; the complete-linkage update
    // D(a∪b, k) = max(D(a,k), D(b,k)) keeps entries exact maxima of raw
    // point-pair distances throughout.
    std::vector<double> D(static_cast<std::size_t>(m) * m, 0.0);
    auto d = [&](int a, int b) -> double& { return D[static_cast<std::size_t>(a) * m + b]; };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) d(i, j) = d(j, i) = dist3(points[sample[i]], points[sample[j]]);

    // Nearest-neighbor-chain agglomeration. Complete linkage is reducible,
    // so reciprocal nearest neighbors may be merged as soon as they are
    // found; the recorded heights form the same dendrogram as global-minimum
    // greedy merging.
    std::vector<bool> active(m, true);
    std::vector<int> rep(m);  // smallest sampled-order item in each slot
    std::iota(rep.begin(), rep.end(), 0);

    struct Merge {
        int rep_a, rep_b;
        double height;
    };
    std::vector<Merge> merges;
    merges.reserve(m - 1);

    std::vector<int> chain;
    int n_active = m;
    int lowest_active = 0;
    while (n_active > 1) {
        if (chain.empty()) {
            while (!active[lowest_active]) ++lowest_active;
            chain.push_back(lowest_active);
        }
        while (true) {
            const int c = chain.back();
            const int prev = chain.size() >= 2 ? chain[chain.size() - 2] : -1;
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (int k = 0; k < m; ++k) {
                if (!active[k] || k == c) continue;
                if (d(c, k) < best_d) {
                    best_d = d(c, k);
                    best = k;
                }
            }
            if (prev >= 0 && d(c, prev) == best_d) best = prev;  // prefer the reciprocal partner
            if (best == prev) {
                merges.push_back({rep[c], rep[prev], best_d});
                chain.pop_back();
                chain.pop_back();
                const int keep = std::min(c, prev);
                const int gone = std::max(c, prev);
                for (int k = 0; k < m; ++k) {
                    if (!active[k] || k == c || k == prev) continue;
                    d(keep, k) = d(k, keep) = std::max(d(c, k), d(prev, k));
                }
                active[gone] = false;
                rep[keep] = std::min(rep[c], rep[prev]);
                --n_active;
                break;
            }
            chain.push_back(best);
        }
    }

    // Cut: merges below the threshold are edges of a forest over the sampled
    // items; connected components are the clusters.
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int>& uf = parent;
    auto find = [&](int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    for (const auto& mg : merges)
        if (mg.height < cfg.linkage_threshold) uf[find(mg.rep_a)] = find(mg.rep_b);

    std::vector<int> root_to_cluster(m, -1);
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < m; ++i) {
        const int r = find(i);
        if (root_to_cluster[r] < 0) {
            root_to_cluster[r] = static_cast<int>(clusters.size());
            clusters.emplace_back();
        }
        clusters[root_to_cluster[r]].push_back(sample[i]);
    }
    return clusters;
}

std::vector<std::vector<int>> assign_and_cleanup(const std::vector<Point3>& all_points,
                                                 const std::vector<std::vector<int>>& clusters,
                                                 const DetectionConfig& cfg) {
    cfg.validate();
    if (clusters.empty()) return {};

    struct Centroid {
        double x = 0.0, y = 0.0;
    };
    std::vector<Centroid> centroids;
    centroids.reserve(clusters.size());
    for (const auto& c : clusters) {
        if (c.empty()) throw std::invalid_argument("assign_and_cleanup: empty input cluster");
        Centroid ctr;
        for (int idx : c) {
            ctr.x += all_points[idx].x;
            ctr.y += all_points[idx].y;
        }
        ctr.x /= static_cast<double>(c.size());
        ctr.y /= static_cast<double>(c.size());
        centroids.push_back(ctr);
    }

    std::vector<std::vector<int>> out(clusters.size());
    for (int i = 0; i < static_cast<int>(all_points.size()); ++i) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < centroids.size(); ++k) {
            const double dx = all_points[i].x - centroids[k].x;
            const double dy = all_points[i].y - centroids[k].y;
            const double dd = std::sqrt(dx * dx + dy * dy);
            if (dd < best_d) {
                best_d = dd;
                best = static_cast<int>(k);
            }
        }
        if (best >= 0 && best_d <= cfg.max_center_distance) out[best].push_back(i);
    }

    std::vector<std::vector<int>> kept;
    for (auto& c : out)
        if (static_cast<int>(c.size()) >= cfg.min_cluster_points) kept.push_back(std::move(c));
    return kept;
}

Detection cluster_representative(const std::vector<Point3>& cluster_points, double t,
                                 std::uint32_t sensor_id) {
    if (cluster_points.empty())
        throw std::invalid_argument("cluster_representative: empty cluster");
    const auto n = cluster_points.size();
    std::vector<int> ord(n);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(),
                     [&](int a, int b) { return cluster_points[a].z < cluster_points[b].z; });
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    const Point3& rep = cluster_points[ord[rank - 1]];
    return Detection{rep, t, static_cast<int>(n), sensor_id};
}

std::vector<Detection> detect_frame(const std::vector<Point3>& points, double t,
                                    std::uint32_t sensor_id, const BackgroundModel& bg,
                                    const DetectionConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const auto fg = subtract_background(points, bg);
    const auto band = height_cutoff(fg, cfg);
    if (band.empty()) return {};

    const auto sampled_clusters = complete_linkage_cluster(band, cfg, seed);
    const auto clusters = assign_and_cleanup(band, sampled_clusters, cfg);

    std::vector<Detection> detections;
    detections.reserve(clusters.size());
    for (const auto& c : clusters) {
        std::vector<Point3> member_points;
        member_points.reserve(c.size());
        for (int idx : c) member_points.push_back(band[idx]);
        detections.push_back(cluster_representative(member_points, t, sensor_id));
    }
    return detections;
}

}  // namespace crowdkit
