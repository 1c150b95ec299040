#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace pathforge::geometry {

/// Cartesian vector. Millimetres for positions, dimensionless for directions.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Minimum length (mm) below which vectors and cross products count as degenerate.
inline constexpr double kDegenerateEps = 1e-6;

/// Throws InvalidArgument unless all components are finite.
const Vec3& require_finite(const Vec3& v, const char* what);

/// Unit quaternion, scalar first. Renormalized on every construction.
class UnitQuaternion {
public:
    UnitQuaternion() = default;
    UnitQuaternion(double w, double x, double y, double z);
    explicit UnitQuaternion(const Eigen::Quaterniond& q);

    static UnitQuaternion identity() { return {}; }
    /// Rotation of `angle_rad` about `axis` (need not be unit length).
    static UnitQuaternion from_axis_angle(const Vec3& axis, double angle_rad);

    double w() const { return w_; }
    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

    double dot(const UnitQuaternion& other) const;
    UnitQuaternion operator-() const { return {-w_, -x_, -y_, -z_}; }
    UnitQuaternion operator*(const UnitQuaternion& rhs) const;
    UnitQuaternion conjugate() const { return {w_, -x_, -y_, -z_}; }

    Eigen::Quaterniond to_eigen() const { return {w_, x_, y_, z_}; }
    Mat3 to_rotation() const { return to_eigen().toRotationMatrix(); }
    Vec3 rotate(const Vec3& v) const { return to_eigen() * v; }

    /// Rotation angle in [0, pi] between two orientations (sign of q ignored).
    static double angle_between(const UnitQuaternion& a, const UnitQuaternion& b);

    bool operator==(const UnitQuaternion&) const = default;

private:
    double w_ = 1.0;
    double x_ = 0.0;
    double y_ = 0.0;
    double z_ = 0.0;
};

struct Pose {
    Vec3 position = Vec3::Zero();
    UnitQuaternion orientation;
};

/// Rigid transform p' = rotation * p + translation.
class FrameTransform {
public:
    FrameTransform() = default;
    /// Throws InvalidArgument when `rotation` is not a proper rotation within 1e-9.
    FrameTransform(const Mat3& rotation, const Vec3& translation);

    static FrameTransform identity() { return {}; }

    const Mat3& rotation() const { return rotation_; }
    const Vec3& translation() const { return translation_; }

    Eigen::Matrix4d homogeneous() const;

    /// (*this) applied after `rhs`.
    FrameTransform operator*(const FrameTransform& rhs) const;

private:
    Mat3 rotation_ = Mat3::Identity();
    Vec3 translation_ = Vec3::Zero();
};

/**
 * Frame taught by three points: `a` is the origin, `b` lies on the +x axis and
 * `c` lies in the positive xOy quadrant.
 *
 * The returned transform maps frame coordinates into the coordinates the points
 * were given in. Its rotation columns are the normalized AB, F = E x AB and
 * E = AB x AC; its translation is `a`.
 *
 * Throws DegenerateFrame when |AB|, |AC| or |AB x AC| is below kDegenerateEps.
 */
FrameTransform frame_from_three_points(const Vec3& a, const Vec3& b, const Vec3& c);

/// Inverse transform: rotation transposed, translation -R^T t.
FrameTransform invert(const FrameTransform& t);

Vec3 transform_point(const FrameTransform& t, const Vec3& p);

}  // namespace pathforge::geometry
