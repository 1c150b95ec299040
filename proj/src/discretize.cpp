#include "pathforge/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pathforge/error.hpp"

namespace pathforge::discretize {

using geometry::kDegenerateEps;
using geometry::require_finite;

namespace {

// Ratios this close to an integer are treated as that integer, so a span that
// is a multiple of the step does not grow a zero-length last movement.
constexpr double kCountSlack = 1e-9;

// Below this angle (rad) Slerp and Nagata fall back to their straight-line forms.
constexpr double kSmallAngle = 1e-6;

void require_positive_step(double step, const char* name) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw Error(ErrorCode::InvalidStep, std::string(name) + " must be a positive finite length");
    }
}

// Angle between two vectors in [0, pi]; atan2 keeps precision near 0 and pi.
double angle_between(const Vec3& u, const Vec3& v) {
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

std::vector<UnitQuaternion> slerp_grid(const UnitQuaternion& q0, const UnitQuaternion& qn_in, std::size_t n) {
    UnitQuaternion qn = qn_in;
    if (q0.dot(qn) < 0.0) {
        qn = -qn;
    }
    const Eigen::Vector4d a(q0.w(), q0.x(), q0.y(), q0.z());
    const Eigen::Vector4d b(qn.w(), qn.x(), qn.y(), qn.z());
    // Same value as acos(q0 . qn), better conditioned for small separations.
    const double theta = 2.0 * std::atan2((a - b).norm(), (a + b).norm());

    std::vector<UnitQuaternion> out;
    out.reserve(n + 1);
    out.push_back(q0);
    for (std::size_t k = 1; k < n; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n);
        Eigen::Vector4d q;
        if (theta < kSmallAngle) {
            q = (1.0 - t) * a + t * b;
        } else {
            const double s = std::sin(theta);
            q = (std::sin((1.0 - t) * theta) / s) * a + (std::sin(t * theta) / s) * b;
        }
        out.emplace_back(q[0], q[1], q[2], q[3]);
    }
    out.push_back(qn);
    return out;
}

}  // namespace

std::size_t step_count(double total, double step) {
    const double ratio = total / step;
    const double n = std::ceil(ratio - kCountSlack);
    return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

std::vector<Vec3> linear_discretize(const Vec3& p_a, const Vec3& p_b, double k) {
    require_finite(p_a, "start point");
    require_finite(p_b, "end point");
    require_positive_step(k, "step k");
    const Vec3 span = p_b - p_a;
    const double length = span.norm();
    if (length == 0.0) {
        throw Error(ErrorCode::DegenerateSegment, "start and end points coincide");
    }
    const Vec3 dir = span / length;
    const std::size_t n = step_count(length, k);

    std::vector<Vec3> points;
    points.reserve(n + 1);
    points.push_back(p_a);
    for (std::size_t j = 1; j < n; ++j) {
        points.push_back(p_a + (static_cast<double>(j) * k) * dir);
    }
    points.push_back(p_b);
    return points;
}

CircleFit fit_circle(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    require_finite(p1, "p1");
    require_finite(p2, "p2");
    require_finite(p3, "p3");
    const Vec3 u = p1 - p3;
    const Vec3 v = p2 - p3;
    const Vec3 w = u.cross(v);
    const double un = u.norm();
    const double vn = v.norm();
    // |u x v| / |u| is the distance of p2 from the line p3-p1.
    if (un < kDegenerateEps || vn < kDegenerateEps || (p2 - p1).norm() < kDegenerateEps ||
        w.norm() / std::max(un, vn) < kDegenerateEps) {
        throw Error(ErrorCode::CollinearPoints, "circle through collinear or coincident points is undefined");
    }
    // Circumcentre of the triangle (p1, p2, p3), expressed relative to p3.
    const Vec3 rel = (u.squaredNorm() * v - v.squaredNorm() * u).cross(w) / (2.0 * w.squaredNorm());
    CircleFit fit;
    fit.center = p3 + rel;
    fit.radius = ((p1 - fit.center).norm() + (p2 - fit.center).norm() + (p3 - fit.center).norm()) / 3.0;
    fit.normal = (p2 - p1).cross(p3 - p1).normalized();
    return fit;
}

std::vector<Vec3> circular_discretize(const Vec3& p1, const Vec3& p2, const Vec3& p3, double l_0) {
    require_positive_step(l_0, "step l_0");
    const CircleFit fit = fit_circle(p1, p2, p3);
    // The inscribed triangle p1 -> p2 -> p3 turns the same way as the arc, so
    // its normal fixes the sweep sense even when p2 lies past a half turn.
    geometry::Mat3 axes;
    axes.col(0) = (p1 - fit.center).normalized();
    axes.col(2) = fit.normal;
    axes.col(1) = fit.normal.cross(axes.col(0));
    const geometry::FrameTransform local_to_global(axes, fit.center);
    const geometry::FrameTransform global_to_local = geometry::invert(local_to_global);

    const Vec3 end_local = geometry::transform_point(global_to_local, p3);
    double theta = std::atan2(end_local.y(), end_local.x());
    if (theta < 0.0) {
        theta += 2.0 * std::numbers::pi;
    }

    const double r = fit.radius;
    const double theta_inc = l_0 / r;
    const std::size_t n = step_count(theta, theta_inc);

    std::vector<Vec3> points;
    points.reserve(n + 1);
    points.push_back(p1);
    for (std::size_t i = 1; i < n; ++i) {
        const double phi = theta_inc * static_cast<double>(i);
        const Vec3 local(r * std::cos(phi), r * std::sin(phi), 0.0);
        points.push_back(geometry::transform_point(local_to_global, local));
    }
    points.push_back(p3);
    return points;
}

NagataCurve nagata_prepare(const Vec3& center, const Vec3& p1, const Vec3& p2) {
    require_finite(center, "centre");
    require_finite(p1, "section start");
    require_finite(p2, "section end");
    const Vec3 r1 = p1 - center;
    const Vec3 r2 = p2 - center;
    if (r1.norm() < kDegenerateEps || r2.norm() < kDegenerateEps) {
        throw Error(ErrorCode::DegenerateNormals, "section endpoint coincides with the centre");
    }

    NagataCurve curve;
    curve.start = p1;
    curve.end = p2;
    curve.n1 = r1.normalized();
    curve.n2 = r2.normalized();
    curve.chord = p2 - p1;
    curve.a = std::clamp(curve.n1.dot(curve.n2), -1.0, 1.0);

    const double alpha = angle_between(curve.n1, curve.n2);
    if (alpha > std::numbers::pi - kSmallAngle) {
        throw Error(ErrorCode::DegenerateNormals, "section angle must be below 180 degrees");
    }
    if (alpha < kSmallAngle) {
        curve.c = Vec3::Zero();
        return curve;
    }

    // c lies in span(n1, n2) and makes the end tangents perpendicular to the
    // normals: (d - c).n1 = 0 and (d + c).n2 = 0.
    const double a = curve.a;
    const double rhs1 = curve.n1.dot(curve.chord);
    const double rhs2 = -curve.n2.dot(curve.chord);
    // 1 - a^2 as |n1 x n2|^2 avoids cancellation for small turning angles.
    const double inv_det = 1.0 / curve.n1.cross(curve.n2).squaredNorm();
    curve.c = inv_det * ((rhs1 - a * rhs2) * curve.n1 + (rhs2 - a * rhs1) * curve.n2);
    return curve;
}

Vec3 nagata_eval(const NagataCurve& curve, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "eta must lie in [0, 1]");
    }
    if (eta == 0.0) {
        return curve.start;
    }
    if (eta == 1.0) {
        return curve.end;
    }
    return curve.start + (curve.chord - curve.c) * eta + curve.c * (eta * eta);
}

std::vector<Vec3> nagata_discretize(const Vec3& center, const Vec3& p1, const Vec3& p2, const Vec3& p3,
                                    double l_0) {
    require_positive_step(l_0, "step l_0");

    std::vector<Vec3> points;
    auto append_section = [&](const Vec3& from, const Vec3& to) {
        const NagataCurve curve = nagata_prepare(center, from, to);
        const double alpha = angle_between(curve.n1, curve.n2);
        if (alpha < kSmallAngle) {
            throw Error(ErrorCode::DegenerateNormals, "section endpoints are collinear with the centre");
        }
        // The section is treated as a circular arc to size the steps.
        const double r = 0.5 * ((from - center).norm() + (to - center).norm());
        const double alpha_0 = l_0 / r;
        const std::size_t n = step_count(alpha, alpha_0);
        const double eta_inc = alpha_0 / alpha;

        if (points.empty()) {
            points.push_back(from);
        }
        for (std::size_t i = 1; i < n; ++i) {
            points.push_back(nagata_eval(curve, eta_inc * static_cast<double>(i)));
        }
        points.push_back(to);
    };

    append_section(p1, p2);
    append_section(p2, p3);
    return points;
}

std::vector<UnitQuaternion> slerp_sequence(const UnitQuaternion& q0, const UnitQuaternion& qn, std::size_t n) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument, "slerp_sequence needs n >= 2");
    }
    return slerp_grid(q0, qn, n);
}

Trajectory attach_orientations(const std::vector<Vec3>& positions, const UnitQuaternion& q_start,
                               const UnitQuaternion& q_end, double step_length) {
    if (positions.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "a trajectory needs at least two positions");
    }
    const std::vector<UnitQuaternion> orientations = slerp_grid(q_start, q_end, positions.size() - 1);
    Trajectory traj;
    traj.step_length = step_length;
    traj.samples.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        traj.samples.push_back({positions[i], orientations[i]});
    }
    return traj;
}

}  // namespace pathforge::discretize
