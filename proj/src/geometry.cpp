#include "pathforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pathforge/error.hpp"

namespace pathforge::geometry {

namespace {

constexpr double kRotationTol = 1e-9;

// Norms this close to 1 are already unit up to rounding; dividing would only
// perturb the last bits and break exact text round trips.
constexpr double kUnitNormSlack = 1e-15;

}  // namespace

const Vec3& require_finite(const Vec3& v, const char* what) {
    if (!v.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite components");
    }
    return v;
}

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z) {
    const double norm = std::sqrt(w * w + x * x + y * y + z * z);
    if (!std::isfinite(norm) || norm == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "quaternion must be finite and non-zero");
    }
    const double scale = std::abs(norm - 1.0) <= kUnitNormSlack ? 1.0 : norm;
    w_ = w / scale;
    x_ = x / scale;
    y_ = y / scale;
    z_ = z / scale;
}

UnitQuaternion::UnitQuaternion(const Eigen::Quaterniond& q)
    : UnitQuaternion(q.w(), q.x(), q.y(), q.z()) {}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle_rad) {
    const double len = axis.norm();
    if (!(len > 0.0) || !std::isfinite(angle_rad)) {
        throw Error(ErrorCode::InvalidArgument, "rotation axis must be non-zero");
    }
    const Vec3 u = axis / len;
    const double s = std::sin(angle_rad / 2.0);
    return {std::cos(angle_rad / 2.0), u.x() * s, u.y() * s, u.z() * s};
}

double UnitQuaternion::dot(const UnitQuaternion& other) const {
    return w_ * other.w_ + x_ * other.x_ + y_ * other.y_ + z_ * other.z_;
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& rhs) const {
    return UnitQuaternion(to_eigen() * rhs.to_eigen());
}

double UnitQuaternion::angle_between(const UnitQuaternion& a, const UnitQuaternion& b) {
    // atan2 form stays accurate for nearly equal orientations where acos(dot) does not.
    const UnitQuaternion rel = a.conjugate() * b;
    const double vec = std::sqrt(rel.x_ * rel.x_ + rel.y_ * rel.y_ + rel.z_ * rel.z_);
    return 2.0 * std::atan2(vec, std::abs(rel.w_));
}

FrameTransform::FrameTransform(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
    if (!rotation.allFinite() || !translation.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "transform has non-finite entries");
    }
    const double ortho_err = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (ortho_err > kRotationTol || std::abs(rotation.determinant() - 1.0) > kRotationTol) {
        throw Error(ErrorCode::InvalidArgument, "rotation is not orthonormal with det +1");
    }
}

Eigen::Matrix4d FrameTransform::homogeneous() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation_;
    m.topRightCorner<3, 1>() = translation_;
    return m;
}

FrameTransform FrameTransform::operator*(const FrameTransform& rhs) const {
    FrameTransform out;
    out.rotation_ = rotation_ * rhs.rotation_;
    out.translation_ = rotation_ * rhs.translation_ + translation_;
    return out;
}

FrameTransform frame_from_three_points(const Vec3& a, const Vec3& b, const Vec3& c) {
    require_finite(a, "frame origin");
    require_finite(b, "frame x-axis point");
    require_finite(c, "frame xOy point");

    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    if (ab.norm() < kDegenerateEps || ac.norm() < kDegenerateEps) {
        throw Error(ErrorCode::DegenerateFrame, "calibration points coincide with the origin");
    }
    const Vec3 e = ab.cross(ac);
    if (e.norm() < kDegenerateEps) {
        throw Error(ErrorCode::DegenerateFrame, "calibration points are collinear");
    }
    const Vec3 f = e.cross(ab);

    Mat3 rotation;
    rotation.col(0) = ab.normalized();
    rotation.col(1) = f.normalized();
    rotation.col(2) = e.normalized();
    return FrameTransform(rotation, a);
}

FrameTransform invert(const FrameTransform& t) {
    const Mat3 rt = t.rotation().transpose();
    return FrameTransform(rt, -rt * t.translation());
}

Vec3 transform_point(const FrameTransform& t, const Vec3& p) {
    return t.rotation() * p + t.translation();
}

}  // namespace pathforge::geometry
