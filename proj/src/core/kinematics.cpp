#include "crowdkit/core/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowdkit {

std::vector<double> smoothed_speeds(const Trajectory& traj, int window) {
    if (traj.size() < 2) throw std::invalid_argument("smoothed_speeds: need at least 2 points");
    if (window < 1) throw std::invalid_argument("smoothed_speeds: window must be >= 1");
    const auto& pts = traj.points();
    const std::size_t m = pts.size() - 1;

    std::vector<double> raw(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double dt = pts[i + 1].t - pts[i].t;
        raw[i] = horizontal_distance(pts[i + 1].position, pts[i].position) / dt;
    }

    const int half = window / 2;
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t lo = i >= static_cast<std::size_t>(half) ? i - half : 0;
        const std::size_t hi = std::min(m - 1, i + static_cast<std::size_t>(half));
        double sum = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) sum += raw[k];
        out[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

double percentile_nearest_rank(std::vector<double> values, double pct) {
    if (values.empty()) throw std::invalid_argument("percentile: empty sample");
    if (!(pct > 0.0 && pct <= 100.0)) throw std::invalid_argument("percentile: pct must be in (0, 100]");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
    if (rank == 0) rank = 1;
    return values[rank - 1];
}

}  // namespace crowdkit
