#include "crowdkit/stitching/spline.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace crowdkit {

namespace {

constexpr int kDegree = 3;

// Knot span containing t (NURBS-book search), with t at or beyond the last
// knot clamped into the final non-empty span.
int find_span(const std::vector<double>& knots, int n_basis, double t) {
    if (t >= knots[n_basis]) return n_basis - 1;
    if (t <= knots[kDegree]) return kDegree;
    int lo = kDegree, hi = n_basis;
    int mid = (lo + hi) / 2;
    while (t < knots[mid] || t >= knots[mid + 1]) {
        if (t < knots[mid])
            hi = mid;
        else
            lo = mid;
        mid = (lo + hi) / 2;
    }
    return mid;
}

// The kDegree+1 basis functions that are non-zero on the given span.
void basis_functions(const std::vector<double>& knots, int span, double t, double* out) {
    double left[kDegree + 1];
    double right[kDegree + 1];
    out[0] = 1.0;
    for (int j = 1; j <= kDegree; ++j) {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = out[r] / (right[r + 1] + left[j - r]);
            out[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        out[j] = saved;
    }
}

}  // namespace

Trajectory smooth_spline(const Trajectory& traj, double output_rate, int points_per_knot) {
    if (!(output_rate > 0.0)) throw std::invalid_argument("smooth_spline: output_rate must be positive");
    if (points_per_knot < 1) throw std::invalid_argument("smooth_spline: points_per_knot must be >= 1");
    if (traj.size() < 4) return traj;

    const auto& pts = traj.points();
    const auto n = static_cast<int>(pts.size());
    const double t0 = pts.front().t;
    const double t1 = pts.back().t;

    int n_basis = std::max(4, static_cast<int>(std::llround(static_cast<double>(n) / points_per_knot)) + 3);
    n_basis = std::min(n_basis, n);
    const int n_interior = n_basis - 4;

    // Clamped uniform knot vector.
    std::vector<double> knots(n_basis + kDegree + 1);
    for (int i = 0; i <= kDegree; ++i) {
        knots[i] = t0;
        knots[n_basis + i] = t1;
    }
    for (int i = 1; i <= n_interior; ++i)
        knots[kDegree + i] = t0 + (t1 - t0) * static_cast<double>(i) / (n_interior + 1);

    // Weighted least squares; heavy endpoint weights pin the seam ends.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n_basis);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 2);
    for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 1e3 : 1.0;
        const int span = find_span(knots, n_basis, pts[i].t);
        double N[kDegree + 1];
        basis_functions(knots, span, pts[i].t, N);
        for (int k = 0; k <= kDegree; ++k) A(i, span - kDegree + k) = w * N[k];
        b(i, 0) = w * pts[i].position.x;
        b(i, 1) = w * pts[i].position.y;
    }
    const Eigen::MatrixXd coeff = A.colPivHouseholderQr().solve(b);

    // Uniform output grid, exact final timestamp preserved.
    const double period = 1.0 / output_rate;
    std::vector<double> times;
    const auto n_steps = static_cast<std::size_t>(std::floor((t1 - t0) * output_rate + 1e-9));
    times.reserve(n_steps + 2);
    for (std::size_t k = 0; k <= n_steps; ++k) times.push_back(t0 + static_cast<double>(k) * period);
    if (t1 - times.back() > 1e-9 * std::max(1.0, std::abs(t1)))
        times.push_back(t1);
    else
        times.back() = t1;

    const double z = traj.mean_height();
    std::vector<TrajectoryPoint> out;
    out.reserve(times.size());
    for (double t : times) {
        const int span = find_span(knots, n_basis, t);
        double N[kDegree + 1];
        basis_functions(knots, span, t, N);
        double x = 0.0, y = 0.0;
        for (int k = 0; k <= kDegree; ++k) {
            x += N[k] * coeff(span - kDegree + k, 0);
            y += N[k] * coeff(span - kDegree + k, 1);
        }
        out.push_back({t, {x, y, z}});
    }
    return Trajectory(traj.id(), std::move(out));
}

}  // namespace crowdkit
