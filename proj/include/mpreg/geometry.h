/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   geometry.h
 * @brief  SO(3)/SE(3) value types, Gibbs vectors, exp/log maps and the
 *         error metrics used across the library.
 */
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace mpreg {

using Vec3    = Eigen::Vector3d;
using Mat3    = Eigen::Matrix3d;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/** A direction with unit norm. Construction normalizes the input and
 *  throws DegenerateGeometry for (near) zero or non-finite vectors. */
class UnitVec3 {
public:
    explicit UnitVec3(const Vec3& v);
    UnitVec3(double x, double y, double z) : UnitVec3(Vec3(x, y, z)) {}

    [[nodiscard]] const Vec3& dir() const noexcept { return dir_; }
    [[nodiscard]] UnitVec3 flipped() const;

    operator const Vec3&() const noexcept { return dir_; }

private:
    struct NoCheck {};
    UnitVec3(const Vec3& v, NoCheck) : dir_(v) {}

    Vec3 dir_;
};

/** Gibbs-Rodrigues vector: axis * tan(angle/2). Singular at 180 deg. */
struct GibbsVector {
    Vec3 g = Vec3::Zero();
};

/** Unit quaternion (qr, qx, qy, qz), kept normalized with qr >= 0. */
class UnitQuaternion {
public:
    UnitQuaternion() = default;
    UnitQuaternion(double qr, double qx, double qy, double qz);

    static UnitQuaternion identity() { return {}; }
    static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);
    static UnitQuaternion from_matrix(const Mat3& R);

    [[nodiscard]] double qr() const noexcept { return q_.w(); }
    [[nodiscard]] double qx() const noexcept { return q_.x(); }
    [[nodiscard]] double qy() const noexcept { return q_.y(); }
    [[nodiscard]] double qz() const noexcept { return q_.z(); }

    [[nodiscard]] Mat3 to_matrix() const { return q_.toRotationMatrix(); }
    [[nodiscard]] Vec3 rotate(const Vec3& v) const { return q_ * v; }
    [[nodiscard]] UnitQuaternion inverse() const;
    [[nodiscard]] const Eigen::Quaterniond& eigen() const noexcept { return q_; }

    /// Hamilton product: (a * b).rotate(v) == a.rotate(b.rotate(v)).
    friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b);

private:
    explicit UnitQuaternion(const Eigen::Quaterniond& q);

    Eigen::Quaterniond q_ = Eigen::Quaterniond::Identity();
};

/** Rigid transform x -> R x + t. */
struct Pose {
    UnitQuaternion rotation;
    Vec3 translation = Vec3::Zero();

    Pose() = default;
    Pose(const UnitQuaternion& q, const Vec3& t) : rotation(q), translation(t) {}

    static Pose identity() { return {}; }

    [[nodiscard]] Mat3 rotation_matrix() const { return rotation.to_matrix(); }
    [[nodiscard]] Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }
    [[nodiscard]] Pose inverse() const;

    /// Composition: (a * b).apply(p) == a.apply(b.apply(p)).
    friend Pose operator*(const Pose& a, const Pose& b);
};

UnitQuaternion quat_from_gibbs(const GibbsVector& g);

/// Skew-symmetric matrix such that skew(a) * b == a.cross(b).
Mat3 skew(const Vec3& v);

Mat3 so3_exp(const Vec3& omega);
/// Guarded rotation log. Uses the diagonal-based axis extraction when the
/// angle is within 1e-3 of pi.
Vec3 so3_log(const Mat3& R);

/// Rotation angle of R in [0, pi], computed with atan2 for accuracy at
/// both ends of the range.
double rotation_angle(const Mat3& R);

/// Tangent ordering is (rho, omega): translation part first.
Pose se3_exp(const Vector6& xi);
Vector6 se3_log(const Pose& p);

/// True when the rotation angle is close enough to pi that the log map
/// falls back to the diagonal axis extraction.
bool log_near_singular(const Mat3& R);

/// ||log(R_gt^T R_est)|| in radians.
double rotation_error(const Mat3& R_est, const Mat3& R_gt);
double translation_error(const Vec3& t_est, const Vec3& t_gt);

}  // namespace mpreg
