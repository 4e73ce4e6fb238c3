/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   solver_olae.cpp
 * @brief  OLAE with sequential rotations.
 */

#include <mpreg/errors.h>
#include <mpreg/solver_olae.h>

#include <cmath>
#include <utility>

namespace mpreg {

namespace {

constexpr double kMinDeterminant = 1e-12;

}  // namespace

OlaeSystem olae_system_from_profile(const Mat3& B)
{
    OlaeSystem s;
    s.B  = B;
    s.S  = B + B.transpose();
    s.p  = B.trace() + 1.0;
    s.m  = B.trace() - 1.0;
    s.z  = Vec3(B(2, 1) - B(1, 2), B(0, 2) - B(2, 0), B(1, 0) - B(0, 1));
    s.Mw = s.S - s.p * Mat3::Identity();
    return s;
}

OlaeSystem attitude_profile(const UnifiedVectors& uv)
{
    Mat3 B = Mat3::Zero();
    Vec3 z = Vec3::Zero();
    for (std::size_t i = 0; i < uv.size(); ++i) {
        B += uv.weights[i] * uv.vb[i] * uv.va[i].transpose();
        z -= uv.weights[i] * uv.vb[i].cross(uv.va[i]);
    }
    OlaeSystem s = olae_system_from_profile(B);
    s.z = z;
    return s;
}

UnitQuaternion sequential_rotation(SequentialAxis axis)
{
    switch (axis) {
        case SequentialAxis::X: return {0.0, 1.0, 0.0, 0.0};
        case SequentialAxis::Y: return {0.0, 0.0, 1.0, 0.0};
        case SequentialAxis::Z: return {0.0, 0.0, 0.0, 1.0};
        case SequentialAxis::None: break;
    }
    return UnitQuaternion::identity();
}

SequentialSelection sequential_rotation_select(const OlaeSystem& sys)
{
    constexpr std::array axes{
        SequentialAxis::None, SequentialAxis::X, SequentialAxis::Y, SequentialAxis::Z};

    SequentialSelection best;
    double best_det = -1.0;
    for (std::size_t k = 0; k < axes.size(); ++k) {
        // Rotating every vb by R_e turns B into R_e B.
        OlaeSystem cand = k == 0 ? sys
                                 : olae_system_from_profile(
                                       sequential_rotation(axes[k]).to_matrix() * sys.B);
        const double det = std::abs(cand.Mw.determinant());
        best.determinants[k] = det;
        if (det > best_det) {
            best_det    = det;
            best.axis   = axes[k];
            best.system = std::move(cand);
        }
    }
    if (best_det < kMinDeterminant)
        throw RegistrationError(ErrorCode::DegenerateGeometry, "all OLAE systems are singular");
    return best;
}

Vec3 solve_linear3(const Mat3& A_in, const Vec3& b_in)
{
    Mat3 A = A_in;
    Vec3 b = b_in;
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
        if (A(piv, col) == 0.0)
            throw RegistrationError(ErrorCode::DegenerateGeometry, "singular 3x3 system");
        if (piv != col) {
            A.row(col).swap(A.row(piv));
            std::swap(b(col), b(piv));
        }
        for (int r = col + 1; r < 3; ++r) {
            const double f = A(r, col) / A(col, col);
            A.row(r) -= f * A.row(col);
            b(r) -= f * b(col);
        }
    }
    Vec3 x;
    for (int r = 2; r >= 0; --r) {
        double acc = b(r);
        for (int c = r + 1; c < 3; ++c) acc -= A(r, c) * x(c);
        x(r) = acc / A(r, r);
    }
    return x;
}

SolverResult solve_olae(const PairingSet& pairings, const ClosedFormOptions& opts)
{
    const UnifiedVectors uv = build_olae_unit_vectors(pairings, opts.unify);
    const OlaeSystem sys    = attitude_profile(uv);

    SequentialSelection sel;
    if (opts.sequential_rotations) {
        sel = sequential_rotation_select(sys);
    } else {
        sel.system          = sys;
        sel.determinants[0] = std::abs(sys.Mw.determinant());
        if (sel.determinants[0] < kMinDeterminant)
            throw RegistrationError(ErrorCode::DegenerateGeometry, "OLAE system is singular");
    }

    const Vec3 g = solve_linear3(sel.system.Mw, sel.system.z);
    if (!g.allFinite())
        throw RegistrationError(ErrorCode::DegenerateGeometry, "non-finite Gibbs vector");

    const UnitQuaternion q = quat_from_gibbs({g}) * sequential_rotation(sel.axis);

    SolverResult r;
    r.pose = Pose(q, uv.centroids.a - q.rotate(uv.centroids.b));
    r.inlier_point_indices          = uv.inlier_point_indices;
    r.outlier_point_indices         = uv.outlier_point_indices;
    r.diagnostics.method            = SolverKind::OLAE;
    r.diagnostics.determinants      = sel.determinants;
    r.diagnostics.sequential_axis   = sel.axis;
    return r;
}

SolverResult solve_olae(const PairingSet& pairings, std::optional<double> s_t)
{
    ClosedFormOptions o;
    o.unify.scale_outlier_threshold = s_t;
    return solve_olae(pairings, o);
}

}  // namespace mpreg
