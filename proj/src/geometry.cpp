/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   geometry.cpp
 * @brief  SO(3)/SE(3) helpers.
 */

#include <mpreg/errors.h>
#include <mpreg/geometry.h>

#include <cmath>
#include <numbers>

namespace mpreg {

namespace {

constexpr double kPi = std::numbers::pi;

// Angles beyond this use the diagonal-based axis extraction in so3_log.
constexpr double kLogSingularMargin = 1e-3;

Vec3 vee(const Mat3& A) { return {A(2, 1), A(0, 2), A(1, 0)}; }

Eigen::Quaterniond canonical(Eigen::Quaterniond q)
{
    q.normalize();
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    return q;
}

}  // namespace

UnitVec3::UnitVec3(const Vec3& v)
{
    const double n = v.norm();
    if (!std::isfinite(n) || n < 1e-300)
        throw RegistrationError(
            ErrorCode::DegenerateGeometry, "cannot normalize a zero or non-finite vector");
    dir_ = v / n;
}

UnitVec3 UnitVec3::flipped() const { return UnitVec3(-dir_, NoCheck{}); }

UnitQuaternion::UnitQuaternion(double qr, double qx, double qy, double qz)
    : q_(canonical(Eigen::Quaterniond(qr, qx, qy, qz)))
{
}

UnitQuaternion::UnitQuaternion(const Eigen::Quaterniond& q) : q_(canonical(q)) {}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle)
{
    const double n = axis.norm();
    if (n == 0.0 || angle == 0.0) return identity();
    const Vec3 u = axis / n;
    const double s = std::sin(0.5 * angle);
    return {std::cos(0.5 * angle), s * u.x(), s * u.y(), s * u.z()};
}

UnitQuaternion UnitQuaternion::from_matrix(const Mat3& R)
{
    return UnitQuaternion(Eigen::Quaterniond(R));
}

UnitQuaternion UnitQuaternion::inverse() const { return UnitQuaternion(q_.conjugate()); }

UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b)
{
    return UnitQuaternion(a.q_ * b.q_);
}

Pose Pose::inverse() const
{
    const UnitQuaternion qi = rotation.inverse();
    return {qi, -qi.rotate(translation)};
}

Pose operator*(const Pose& a, const Pose& b)
{
    return {a.rotation * b.rotation, a.rotation.rotate(b.translation) + a.translation};
}

UnitQuaternion quat_from_gibbs(const GibbsVector& gv)
{
    const Vec3& g  = gv.g;
    const double qr = 1.0 / std::sqrt(1.0 + g.squaredNorm());
    return {qr, qr * g.x(), qr * g.y(), qr * g.z()};
}

Mat3 skew(const Vec3& v)
{
    Mat3 S;
    S << 0.0, -v.z(), v.y(),  //
        v.z(), 0.0, -v.x(),   //
        -v.y(), v.x(), 0.0;
    return S;
}

Mat3 so3_exp(const Vec3& omega)
{
    const double theta2 = omega.squaredNorm();
    const double theta  = std::sqrt(theta2);
    const Mat3 K        = skew(omega);
    double a = 0.0, b = 0.0;
    if (theta < 1e-5) {
        a = 1.0 - theta2 / 6.0;
        b = 0.5 - theta2 / 24.0;
    } else {
        const double sh = std::sin(0.5 * theta);
        a = std::sin(theta) / theta;
        b = 2.0 * sh * sh / theta2;
    }
    return Mat3::Identity() + a * K + b * K * K;
}

double rotation_angle(const Mat3& R)
{
    const double s = 0.5 * vee(R - R.transpose()).norm();
    const double c = 0.5 * (R.trace() - 1.0);
    return std::atan2(s, c);
}

bool log_near_singular(const Mat3& R) { return rotation_angle(R) > kPi - kLogSingularMargin; }

Vec3 so3_log(const Mat3& R)
{
    const double theta = rotation_angle(R);
    const Vec3 v       = vee(R - R.transpose());  // = 2 sin(theta) axis

    if (theta < 1e-8) return 0.5 * v;

    if (theta > kPi - kLogSingularMargin) {
        // a a^T = ((R + R^T)/2 - cos(theta) I) / (1 - cos(theta))
        const double c = std::cos(theta);
        const Mat3 M   = (0.5 * (R + R.transpose()) - c * Mat3::Identity()) / (1.0 - c);
        Eigen::Index k = 0;
        M.diagonal().maxCoeff(&k);
        Vec3 axis = M.col(k) / std::sqrt(std::max(M(k, k), 1e-300));
        axis.normalize();
        if (axis.dot(v) < 0.0) axis = -axis;
        return theta * axis;
    }
    return (theta / (2.0 * std::sin(theta))) * v;
}

Pose se3_exp(const Vector6& xi)
{
    const Vec3 rho    = xi.head<3>();
    const Vec3 omega  = xi.tail<3>();
    const double th2  = omega.squaredNorm();
    const double th   = std::sqrt(th2);
    const Mat3 K      = skew(omega);
    // a = (1 - cos)/th^2, b = (th - sin)/th^3; series where cancellation bites.
    double a = 0.0, b = 0.0;
    if (th < 1e-2) {
        a = 0.5 - th2 / 24.0 + th2 * th2 / 720.0;
        b = 1.0 / 6.0 - th2 / 120.0 + th2 * th2 / 5040.0;
    } else {
        const double sh = std::sin(0.5 * th);
        a = 2.0 * sh * sh / th2;
        b = (th - std::sin(th)) / (th2 * th);
    }
    const Mat3 V = Mat3::Identity() + a * K + b * K * K;
    return {UnitQuaternion::from_axis_angle(omega, th), V * rho};
}

Vector6 se3_log(const Pose& p)
{
    const Vec3 omega = so3_log(p.rotation_matrix());
    const double th2 = omega.squaredNorm();
    const double th  = std::sqrt(th2);
    const Mat3 K     = skew(omega);
    // c = (1 - (th/2) cot(th/2)) / th^2
    double c = 0.0;
    if (th < 1e-2) {
        c = 1.0 / 12.0 + th2 / 720.0 + th2 * th2 / 30240.0;
    } else {
        const double h = 0.5 * th;
        c = (1.0 - h * std::cos(h) / std::sin(h)) / th2;
    }
    const Mat3 Vinv = Mat3::Identity() - 0.5 * K + c * K * K;

    Vector6 xi;
    xi.head<3>() = Vinv * p.translation;
    xi.tail<3>() = omega;
    return xi;
}

double rotation_error(const Mat3& R_est, const Mat3& R_gt)
{
    return rotation_angle(R_gt.transpose() * R_est);
}

double translation_error(const Vec3& t_est, const Vec3& t_gt) { return (t_est - t_gt).norm(); }

}  // namespace mpreg
