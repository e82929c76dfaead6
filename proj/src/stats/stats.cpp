#include "crowdkit/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "crowdkit/common/textio.hpp"
#include "crowdkit/core/kinematics.hpp"

namespace crowdkit {

SpeedDistribution speed_distribution(const TrajectorySet& set) {
    if (set.empty()) throw std::invalid_argument("speed_distribution: empty trajectory set");

    std::vector<double> means;
    means.reserve(set.size());
    for (const auto& traj : set.trajectories()) {
        if (traj.size() < 2)
            throw std::invalid_argument("speed_distribution: trajectory '" + traj.id() +
                                        "' has fewer than 2 points");
        const auto speeds = smoothed_speeds(traj, 5);
        double sum = 0.0;
        for (double s : speeds) sum += s;
        means.push_back(sum / static_cast<double>(speeds.size()));
    }

    SpeedDistribution dist;
    dist.count = static_cast<int>(means.size());

    std::map<long, int> bin_counts;
    double mu = 0.0;
    for (double v : means) {
        ++bin_counts[static_cast<long>(std::floor(v / 0.1))];
        mu += v;
    }
    mu /= static_cast<double>(means.size());
    double var = 0.0;
    for (double v : means) var += (v - mu) * (v - mu);
    dist.mu = mu;
    dist.sigma = means.size() > 1
                     ? std::sqrt(var / static_cast<double>(means.size() - 1))
                     : 0.0;
    for (const auto& [k, c] : bin_counts)
        dist.bins.emplace_back(0.1 * static_cast<double>(k), c);
    return dist;
}

std::string speed_histogram_text(const SpeedDistribution& dist) {
    std::ostringstream os;
    os << "# mean_mps = " << fmt_double(dist.mu) << "\n";
    os << "# std_mps = " << fmt_double(dist.sigma) << "\n";
    os << "# trajectories = " << dist.count << "\n";
    os << "# bin_center_mps count\n";
    for (const auto& [edge, count] : dist.bins)
        os << fmt_double(edge + 0.05) << ' ' << count << "\n";
    return os.str();
}

double first_gate_crossing(const Trajectory& traj, const GateLine& gate, double t_min) {
    const auto& pts = traj.points();
    const double gx = gate.x1 - gate.x0;
    const double gy = gate.y1 - gate.y0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double px = pts[i].position.x, py = pts[i].position.y;
        const double dx = pts[i + 1].position.x - px;
        const double dy = pts[i + 1].position.y - py;
        const double denom = dx * gy - dy * gx;
        if (std::abs(denom) < 1e-15) continue;  // parallel or degenerate
        const double rx = gate.x0 - px;
        const double ry = gate.y0 - py;
        const double s = (rx * gy - ry * gx) / denom;  // along the path segment
        const double u = (rx * dy - ry * dx) / denom;  // along the gate
        if (s < 0.0 || s > 1.0 || u < 0.0 || u > 1.0) continue;
        const double t_cross = pts[i].t + s * (pts[i + 1].t - pts[i].t);
        if (t_cross >= t_min) return t_cross;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

WalkingTimeCdf walking_time_cdf(const TrajectorySet& set, const GateLine& entry,
                                const GateLine& exit) {
    WalkingTimeCdf cdf;
    for (const auto& traj : set.trajectories()) {
        const double t_entry =
            first_gate_crossing(traj, entry, -std::numeric_limits<double>::infinity());
        if (std::isnan(t_entry)) {
            ++cdf.excluded;
            continue;
        }
        const double t_exit = first_gate_crossing(traj, exit, t_entry);
        if (std::isnan(t_exit)) {
            ++cdf.excluded;
            continue;
        }
        cdf.times.push_back(t_exit - t_entry);
    }
    std::sort(cdf.times.begin(), cdf.times.end());
    return cdf;
}

std::string cdf_table_text(const WalkingTimeCdf& cdf) {
    std::ostringstream os;
    os << "# samples = " << cdf.times.size() << "\n";
    os << "# excluded = " << cdf.excluded << "\n";
    os << "# walking_time_s cdf\n";
    const double n = static_cast<double>(cdf.times.size());
    for (std::size_t i = 0; i < cdf.times.size(); ++i)
        os << fmt_double(cdf.times[i]) << ' ' << fmt_double(static_cast<double>(i + 1) / n)
           << "\n";
    return os.str();
}

double kolmogorov_tail(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100000; ++k) {
        const double term = std::exp(-2.0 * static_cast<double>(k) * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-14 && k >= 4) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: both samples must be non-empty");
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    std::vector<double> pooled;
    pooled.reserve(sa.size() + sb.size());
    pooled.insert(pooled.end(), sa.begin(), sa.end());
    pooled.insert(pooled.end(), sb.begin(), sb.end());
    std::sort(pooled.begin(), pooled.end());
    pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    for (double v : pooled) {
        while (ia < sa.size() && sa[ia] <= v) ++ia;
        while (ib < sb.size() && sb[ib] <= v) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }

    KsResult result;
    result.d = d;
    result.n_effective = na * nb / (na + nb);
    result.p = kolmogorov_tail(std::sqrt(result.n_effective) * d);
    result.small_sample = std::min(sa.size(), sb.size()) < 25;
    return result;
}

}  // namespace crowdkit
