#pragma once

#include <cstddef>
#include <vector>

#include "pathforge/geometry.hpp"

namespace pathforge::discretize {

using geometry::Pose;
using geometry::UnitQuaternion;
using geometry::Vec3;

struct Trajectory {
    std::vector<Pose> samples;
    /// Nominal spacing k (linear) or l_0 (circular, Nagata), mm.
    double step_length = 0.0;
};

struct CircleFit {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
    /// Unit normal of the circle plane, oriented by (p2 - p1) x (p3 - p1).
    Vec3 normal = Vec3::UnitZ();
};

/// Quadratic curve segment P(eta) = start + (chord - c) eta + c eta^2.
struct NagataCurve {
    Vec3 start = Vec3::Zero();
    Vec3 end = Vec3::Zero();
    Vec3 n1 = Vec3::UnitX();
    Vec3 n2 = Vec3::UnitX();
    Vec3 chord = Vec3::Zero();
    /// cos of the angle between n1 and n2.
    double a = 1.0;
    Vec3 c = Vec3::Zero();
};

/// Number of increments for a span of `total` walked in steps of `step`.
/// Rounds up so every step but the last has full length; never less than one.
std::size_t step_count(double total, double step);

/// Points from `p_a` to `p_b` spaced `k` apart, last increment possibly shorter.
/// Throws InvalidStep for k <= 0 and DegenerateSegment when the endpoints coincide.
std::vector<Vec3> linear_discretize(const Vec3& p_a, const Vec3& p_b, double k);

/// Circle through three points. Throws CollinearPoints when the fit is singular.
CircleFit fit_circle(const Vec3& p1, const Vec3& p2, const Vec3& p3);

/**
 * Arc from p1 through p2 to p3 sampled at arc-length spacing `l_0`.
 *
 * Points are generated in a local frame centred on the circle (x along
 * centre->p1, z along the normal of the triangle p1, p2, p3) and mapped back. The sweep is the
 * angle from p1 to p3 measured in the direction of p2, so arcs longer than a
 * half circle are supported. The final sample is p3 exactly.
 */
std::vector<Vec3> circular_discretize(const Vec3& p1, const Vec3& p2, const Vec3& p3, double l_0);

/// Curve data for the section p1 -> p2 around `center`.
/// Normals pointing the same way give the straight chord (c = 0);
/// opposite normals throw DegenerateNormals.
NagataCurve nagata_prepare(const Vec3& center, const Vec3& p1, const Vec3& p2);

/// Throws OutOfRange for eta outside [0, 1].
Vec3 nagata_eval(const NagataCurve& curve, double eta);

/// Two-section curvilinear path p1 -> p2 -> p3 around `center`; p2 appears once.
/// Both sections need a turning angle strictly inside (0, 180) degrees.
std::vector<Vec3> nagata_discretize(const Vec3& center, const Vec3& p1, const Vec3& p2, const Vec3& p3,
                                    double l_0);

/// n + 1 orientations at t = 0, 1/n, ..., 1 along the shortest great arc.
/// Throws InvalidArgument for n < 2.
std::vector<UnitQuaternion> slerp_sequence(const UnitQuaternion& q0, const UnitQuaternion& qn, std::size_t n);

/// Pairs each position with an evenly spaced Slerp orientation.
Trajectory attach_orientations(const std::vector<Vec3>& positions, const UnitQuaternion& q_start,
                               const UnitQuaternion& q_end, double step_length = 0.0);

}  // namespace pathforge::discretize
