/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
// Random generators and independent oracles shared by the unit tests.
#pragma once

#include <mpreg/errors.h>
#include <mpreg/geometry.h>
#include <mpreg/primitives.h>

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace mpreg::test {

inline constexpr double kPi = std::numbers::pi;

/// Rodrigues' rotation formula written out explicitly; independent of the
/// quaternion and exp-map code under test.
inline Mat3 axis_angle_matrix(Vec3 axis, double angle)
{
    axis.normalize();
    const double c = std::cos(angle), s = std::sin(angle), C = 1.0 - c;
    const double x = axis.x(), y = axis.y(), z = axis.z();
    Mat3 R;
    R << c + x * x * C, x * y * C - z * s, x * z * C + y * s,  //
        y * x * C + z * s, c + y * y * C, y * z * C - x * s,   //
        z * x * C - y * s, z * y * C + x * s, c + z * z * C;
    return R;
}

inline Mat3 rot_x(double a) { return axis_angle_matrix(Vec3::UnitX(), a); }
inline Mat3 rot_z(double a) { return axis_angle_matrix(Vec3::UnitZ(), a); }

inline Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 v;
    do v = Vec3(n(rng), n(rng), n(rng));
    while (v.norm() < 1e-6);
    return v.normalized();
}

inline Vec3 random_in_cube(std::mt19937_64& rng, double lo = 0.0, double hi = 50.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(rng), u(rng), u(rng)};
}

inline UnitQuaternion random_rotation(std::mt19937_64& rng, double max_angle = kPi)
{
    std::uniform_real_distribution<double> u(0.0, max_angle);
    return UnitQuaternion::from_axis_angle(random_unit(rng), u(rng));
}

inline Pose random_pose(std::mt19937_64& rng, double max_angle = kPi)
{
    return {random_rotation(rng, max_angle), random_in_cube(rng)};
}

inline Pose pose_from_matrix(const Mat3& R, const Vec3& t)
{
    return {UnitQuaternion::from_matrix(R), t};
}

/// Pairings with a = gt(b): b drawn first, a obtained by the transform.
inline PairingSet make_pairings(
    std::mt19937_64& rng, const Pose& gt, std::size_t n_points, std::size_t n_planes,
    std::size_t n_lines = 0)
{
    PairingSet ps;
    for (std::size_t i = 0; i < n_points; ++i) {
        const Vec3 b = random_in_cube(rng);
        ps.point_pairs.push_back({gt.apply(b), b, 1.0});
    }
    for (std::size_t i = 0; i < n_planes; ++i) {
        const Plane b{random_in_cube(rng), UnitVec3(random_unit(rng))};
        ps.plane_pairs.push_back({transform_primitive(gt, b), b, 1.0});
    }
    for (std::size_t i = 0; i < n_lines; ++i) {
        const Line b{random_in_cube(rng), UnitVec3(random_unit(rng))};
        ps.line_pairs.push_back({transform_primitive(gt, b), b, 1.0});
    }
    return ps;
}

/// Runs f and returns the code of the RegistrationError it throws.
inline std::optional<ErrorCode> code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const RegistrationError& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected RegistrationError";
    return std::nullopt;
}

}  // namespace mpreg::test
