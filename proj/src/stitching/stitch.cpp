#include "crowdkit/stitching/stitch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "crowdkit/common/textio.hpp"
#include "crowdkit/stitching/hungarian.hpp"
#include "crowdkit/stitching/spline.hpp"

namespace crowdkit {

void StitchConfig::validate() const {
    if (!(h_start > 0.0) || !(h_start <= h_max))
        throw std::invalid_argument("stitch thresholds must satisfy 0 < h_start <= h_max");
    if (!(h_step > 0.0)) throw std::invalid_argument("h_step must be positive");
    if (!(output_rate > 0.0)) throw std::invalid_argument("output_rate must be positive");
    if (!(seam_overlap_max >= 0.0)) throw std::invalid_argument("seam_overlap_max must be >= 0");
    if (spline_points_per_knot < 1)
        throw std::invalid_argument("spline_points_per_knot must be >= 1");
}

std::vector<double> StitchConfig::schedule() const {
    validate();
    std::vector<double> out;
    for (double h = h_start; h < h_max - 1e-12; h += h_step) out.push_back(h);
    out.push_back(h_max);
    return out;
}

EndpointFeature start_feature(const Trajectory& traj) {
    const auto& p = traj.front();
    return {p.t, p.position.x, p.position.y, traj.mean_height()};
}

EndpointFeature end_feature(const Trajectory& traj) {
    const auto& p = traj.back();
    return {p.t, p.position.x, p.position.y, traj.mean_height()};
}

double endpoint_distance(const EndpointFeature& a_end, const EndpointFeature& b_start) {
    const double dt = a_end.t - b_start.t;
    const double dx = a_end.x - b_start.x;
    const double dy = a_end.y - b_start.y;
    const double dz = a_end.zbar - b_start.zbar;
    return std::sqrt(dt * dt + dx * dx + dy * dy + dz * dz);
}

DistanceMatrix build_distance_matrix(const std::vector<Trajectory>& ending,
                                     const std::vector<Trajectory>& starting) {
    if (ending.empty() || starting.empty())
        throw std::invalid_argument("build_distance_matrix: empty trajectory list");
    const int ne = static_cast<int>(ending.size());
    const int ns = static_cast<int>(starting.size());
    const int n = std::max(ne, ns);

    DistanceMatrix dm;
    dm.n_ending = ne;
    dm.n_starting = ns;
    double max_real = 0.0;
    std::vector<std::vector<double>> real(ne, std::vector<double>(ns, 0.0));
    for (int i = 0; i < ne; ++i)
        for (int j = 0; j < ns; ++j) {
            real[i][j] = endpoint_distance(end_feature(ending[i]), start_feature(starting[j]));
            max_real = std::max(max_real, real[i][j]);
        }
    dm.d0 = max_real + 1.0;
    dm.cost.assign(n, std::vector<double>(n, dm.d0));
    for (int i = 0; i < ne; ++i)
        for (int j = 0; j < ns; ++j) dm.cost[i][j] = real[i][j];
    return dm;
}

std::vector<MatchRecord> MatchReport::accepted() const {
    std::vector<MatchRecord> out;
    for (const auto& r : records)
        if (r.accepted) out.push_back(r);
    return out;
}

std::string match_report_text(const MatchReport& report) {
    std::ostringstream os;
    os << "# id_a id_b cost round_h verdict\n";
    for (const auto& r : report.records)
        os << r.id_a << ' ' << r.id_b << ' ' << fmt_double(r.cost) << ' ' << fmt_double(r.round_h)
           << ' ' << (r.accepted ? "accepted" : "rejected") << "\n";
    return os.str();
}

void write_match_report(const std::string& path, const MatchReport& report) {
    write_text_file(path, match_report_text(report));
}

MatchReport read_match_report(const std::string& path) {
    MatchReport report;
    for (const auto& raw : read_lines(path)) {
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_ws(line);
        if (f.size() != 5) throw std::runtime_error(path + ": bad match record '" + line + "'");
        MatchRecord r;
        r.id_a = f[0];
        r.id_b = f[1];
        r.cost = parse_double(f[2], "cost");
        r.round_h = parse_double(f[3], "round_h");
        if (f[4] == "accepted")
            r.accepted = true;
        else if (f[4] == "rejected")
            r.accepted = false;
        else
            throw std::runtime_error(path + ": bad verdict '" + f[4] + "'");
        report.records.push_back(r);
    }
    return report;
}

namespace {

struct Fragment {
    const Trajectory* traj = nullptr;
    int set = 0;  // 0 = a, 1 = b
    bool end_used = false;
    bool start_used = false;
};

int uf_find(std::vector<int>& parent, int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

}  // namespace

StitchResult iterative_stitch(const TrajectorySet& set_a, const TrajectorySet& set_b,
                              const StitchConfig& cfg) {
    cfg.validate();

    std::vector<Fragment> frags;
    for (const auto& t : set_a.trajectories()) frags.push_back({&t, 0, false, false});
    for (const auto& t : set_b.trajectories()) frags.push_back({&t, 1, false, false});
    const int nf = static_cast<int>(frags.size());

    std::vector<int> parent(nf);
    std::iota(parent.begin(), parent.end(), 0);

    StitchResult result;
    result.merged = TrajectorySet(cfg.smoothing_enabled ? cfg.output_rate : set_a.frame_rate());

    auto eligible = [&](int e, int s) {
        if (e == s || frags[e].set == frags[s].set) return false;
        // A later fragment may only continue an earlier one; bounded seam
        // overlap tolerates double-tracking in the sensor overlap region.
        return frags[s].traj->front().t >= frags[e].traj->back().t - cfg.seam_overlap_max;
    };
    auto pair_cost = [&](int e, int s) {
        return endpoint_distance(end_feature(*frags[e].traj), start_feature(*frags[s].traj));
    };

    for (double h : cfg.schedule()) {
        for (int source_set = 0; source_set <= 1; ++source_set) {
            // Fragments qualify for this round only with an unassigned
            // endpoint and at least one eligible partner below h.
            std::vector<int> rows, cols;
            for (int e = 0; e < nf; ++e) {
                if (frags[e].set != source_set || frags[e].end_used) continue;
                for (int s = 0; s < nf; ++s)
                    if (frags[s].set != source_set && !frags[s].start_used && eligible(e, s) &&
                        pair_cost(e, s) < h) {
                        rows.push_back(e);
                        break;
                    }
            }
            for (int s = 0; s < nf; ++s) {
                if (frags[s].set == source_set || frags[s].start_used) continue;
                for (int e = 0; e < nf; ++e)
                    if (frags[e].set == source_set && !frags[e].end_used && eligible(e, s) &&
                        pair_cost(e, s) < h) {
                        cols.push_back(s);
                        break;
                    }
            }
            if (rows.empty() || cols.empty()) continue;

            const int n = static_cast<int>(std::max(rows.size(), cols.size()));
            double max_real = 0.0;
            for (int e : rows)
                for (int s : cols)
                    if (eligible(e, s)) max_real = std::max(max_real, pair_cost(e, s));
            const double d0 = max_real + 1.0;
            std::vector<std::vector<double>> cost(n, std::vector<double>(n, d0));
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t j = 0; j < cols.size(); ++j)
                    if (eligible(rows[i], cols[j])) cost[i][j] = pair_cost(rows[i], cols[j]);

            const auto assignment = hungarian_assign(cost);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const int j = assignment[i];
                if (j >= static_cast<int>(cols.size())) continue;  // null column
                const int e = rows[i];
                const int s = cols[j];
                MatchRecord rec;
                rec.id_a = frags[e].traj->id();
                rec.id_b = frags[s].traj->id();
                rec.cost = cost[i][j];
                rec.round_h = h;
                const bool same_group = uf_find(parent, e) == uf_find(parent, s);
                rec.accepted = eligible(e, s) && cost[i][j] < h && !same_group;
                if (rec.accepted) {
                    parent[uf_find(parent, e)] = uf_find(parent, s);
                    frags[e].end_used = true;
                    frags[s].start_used = true;
                }
                result.report.records.push_back(rec);
            }
        }
    }

    // Assemble output groups in time order.
    std::vector<std::vector<int>> groups(nf);
    for (int i = 0; i < nf; ++i) groups[uf_find(parent, i)].push_back(i);

    struct OutGroup {
        double t0;
        std::vector<int> members;
    };
    std::vector<OutGroup> out_groups;
    for (auto& g : groups) {
        if (g.empty()) continue;
        std::sort(g.begin(), g.end(),
                  [&](int x, int y) { return frags[x].traj->front().t < frags[y].traj->front().t; });
        out_groups.push_back({frags[g.front()].traj->front().t, g});
    }
    std::sort(out_groups.begin(), out_groups.end(), [](const OutGroup& a, const OutGroup& b) {
        return a.t0 < b.t0;
    });

    auto unique_id = [&](std::string id) {
        if (!result.merged.contains(id)) return id;
        for (int k = 2;; ++k) {
            const std::string candidate = id + "_" + std::to_string(k);
            if (!result.merged.contains(candidate)) return candidate;
        }
    };

    for (const auto& og : out_groups) {
        if (og.members.size() == 1) {
            const Trajectory& t = *frags[og.members[0]].traj;
            result.merged.add(Trajectory(unique_id(t.id()), t.points()));
            continue;
        }
        std::vector<TrajectoryPoint> pooled;
        std::string id;
        for (int m : og.members) {
            const Trajectory& t = *frags[m].traj;
            pooled.insert(pooled.end(), t.points().begin(), t.points().end());
            id += (id.empty() ? "" : "+") + t.id();
        }
        std::stable_sort(pooled.begin(), pooled.end(),
                         [](const TrajectoryPoint& a, const TrajectoryPoint& b) { return a.t < b.t; });
        // Seam points recorded by both sensors within 1 ms collapse to their mean.
        std::vector<TrajectoryPoint> dedup;
        for (std::size_t i = 0; i < pooled.size();) {
            std::size_t j = i + 1;
            TrajectoryPoint acc = pooled[i];
            while (j < pooled.size() && pooled[j].t - pooled[i].t <= 1e-3) {
                acc.t += pooled[j].t;
                acc.position = acc.position + pooled[j].position;
                ++j;
            }
            const double k = static_cast<double>(j - i);
            acc.t /= k;
            acc.position = (1.0 / k) * acc.position;
            dedup.push_back(acc);
            i = j;
        }
        Trajectory merged(unique_id(id), std::move(dedup));
        if (cfg.smoothing_enabled && merged.size() >= 4)
            merged = smooth_spline(merged, cfg.output_rate, cfg.spline_points_per_knot);
        result.merged.add(std::move(merged));
    }
    return result;
}

}  // namespace crowdkit
