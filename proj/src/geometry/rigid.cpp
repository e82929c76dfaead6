#include "crowdkit/geometry/rigid.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "crowdkit/common/textio.hpp"

namespace crowdkit {

namespace {

Eigen::Matrix3d to_eigen(const std::array<double, 9>& r) {
    Eigen::Matrix3d m;
    m << r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8];
    return m;
}

std::array<double, 9> from_eigen(const Eigen::Matrix3d& m) {
    return {m(0, 0), m(0, 1), m(0, 2), m(1, 0), m(1, 1), m(1, 2), m(2, 0), m(2, 1), m(2, 2)};
}

}  // namespace

void RigidTransform::validate() const {
    const Eigen::Matrix3d R = to_eigen(rotation);
    if (!R.allFinite() || !translation.finite())
        throw std::invalid_argument("rigid transform has non-finite entries");
    const double ortho_err = (R.transpose() * R - Eigen::Matrix3d::Identity()).norm();
    if (ortho_err > 1e-9)
        throw std::invalid_argument("rotation is not orthonormal (error " + fmt_double(ortho_err) + ")");
    if (std::abs(R.determinant() - 1.0) > 1e-9)
        throw std::invalid_argument("rotation determinant is not +1");
}

RigidTransform RigidTransform::inverse() const {
    const Eigen::Matrix3d R = to_eigen(rotation);
    const Eigen::Vector3d t(translation.x, translation.y, translation.z);
    const Eigen::Matrix3d Ri = R.transpose();
    const Eigen::Vector3d ti = -Ri * t;
    return {from_eigen(Ri), {ti.x(), ti.y(), ti.z()}};
}

Point3 apply_transform(const RigidTransform& tf, const Point3& p) {
    const auto& r = tf.rotation;
    return {r[0] * p.x + r[1] * p.y + r[2] * p.z + tf.translation.x,
            r[3] * p.x + r[4] * p.y + r[5] * p.z + tf.translation.y,
            r[6] * p.x + r[7] * p.y + r[8] * p.z + tf.translation.z};
}

std::vector<Point3> apply_transform(const RigidTransform& tf, const std::vector<Point3>& pts) {
    std::vector<Point3> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(apply_transform(tf, p));
    return out;
}

RigidTransform estimate_rigid_transform(const std::vector<PointMatch>& matches) {
    if (matches.size() < 3)
        throw std::invalid_argument("estimate_rigid_transform: need at least 3 matches");
    const auto n = static_cast<Eigen::Index>(matches.size());

    Eigen::Vector3d mean_c = Eigen::Vector3d::Zero();
    Eigen::Vector3d mean_w = Eigen::Vector3d::Zero();
    for (const auto& m : matches) {
        if (!m.world.finite() || !m.camera.finite())
            throw std::invalid_argument("estimate_rigid_transform: non-finite match");
        mean_c += Eigen::Vector3d(m.camera.x, m.camera.y, m.camera.z);
        mean_w += Eigen::Vector3d(m.world.x, m.world.y, m.world.z);
    }
    mean_c /= static_cast<double>(n);
    mean_w /= static_cast<double>(n);

    // Cross-covariance of centered camera and world point sets.
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    double scale = 0.0;
    for (const auto& m : matches) {
        const Eigen::Vector3d c = Eigen::Vector3d(m.camera.x, m.camera.y, m.camera.z) - mean_c;
        const Eigen::Vector3d w = Eigen::Vector3d(m.world.x, m.world.y, m.world.z) - mean_w;
        H += c * w.transpose();
        scale += c.squaredNorm();
    }

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d sv = svd.singularValues();
    // Rotation is unconstrained about the axis of a collinear point set; the
    // second singular value vanishes exactly in that case.
    if (sv(1) <= 1e-9 * std::max(1.0, scale))
        throw std::invalid_argument("estimate_rigid_transform: degenerate (collinear) matches");

    Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) D(2, 2) = -1.0;
    const Eigen::Matrix3d R = svd.matrixV() * D * svd.matrixU().transpose();
    const Eigen::Vector3d t = mean_w - R * mean_c;

    RigidTransform tf{from_eigen(R), {t.x(), t.y(), t.z()}};
    tf.validate();
    return tf;
}

double calibration_rmse(const RigidTransform& tf, const std::vector<PointMatch>& matches) {
    if (matches.empty()) throw std::invalid_argument("calibration_rmse: no matches");
    double sum = 0.0;
    for (const auto& m : matches) {
        const Point3 r = m.world - apply_transform(tf, m.camera);
        sum += r.x * r.x + r.y * r.y + r.z * r.z;
    }
    return std::sqrt(sum / static_cast<double>(matches.size()));
}

std::map<std::uint32_t, RigidTransform> read_calibration_file(const std::string& path) {
    std::map<std::uint32_t, RigidTransform> out;
    for (const auto& raw : read_lines(path)) {
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_ws(line);
        if (f.size() != 13)
            throw std::runtime_error(path + ": calibration record needs 13 fields, got " +
                                     std::to_string(f.size()));
        const long sid = parse_long(f[0], "sensor_id");
        if (sid < 0) throw std::runtime_error(path + ": negative sensor_id");
        RigidTransform tf;
        for (int i = 0; i < 9; ++i) tf.rotation[i] = parse_double(f[1 + i], "rotation entry");
        tf.translation = {parse_double(f[10], "tx"), parse_double(f[11], "ty"),
                          parse_double(f[12], "tz")};
        tf.validate();
        out[static_cast<std::uint32_t>(sid)] = tf;
    }
    return out;
}

std::string calibration_file_text(const std::map<std::uint32_t, RigidTransform>& calib) {
    // Full precision: rotations must survive a round-trip within the 1e-9
    // orthonormality tolerance.
    auto fmt_exact = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "# sensor_id r00 r01 r02 r10 r11 r12 r20 r21 r22 tx ty tz\n";
    for (const auto& [sid, tf] : calib) {
        os << sid;
        for (double r : tf.rotation) os << ' ' << fmt_exact(r);
        os << ' ' << fmt_exact(tf.translation.x) << ' ' << fmt_exact(tf.translation.y) << ' '
           << fmt_exact(tf.translation.z) << "\n";
    }
    return os.str();
}

void write_calibration_file(const std::string& path,
                            const std::map<std::uint32_t, RigidTransform>& calib) {
    write_text_file(path, calibration_file_text(calib));
}

}  // namespace crowdkit
