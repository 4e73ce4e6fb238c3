/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   solver_horn.cpp
 * @brief  Closed-form absolute orientation (Horn, 1987) generalized to
 *         unified point/line/plane vectors.
 */

#include <mpreg/errors.h>
#include <mpreg/solver_horn.h>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace mpreg {

std::string to_string(SolverKind k)
{
    switch (k) {
        case SolverKind::Horn: return "horn";
        case SolverKind::OLAE: return "olae";
        case SolverKind::GaussNewton: return "gn";
    }
    return "unknown";
}

SolverKind solver_from_string(const std::string& s)
{
    std::string l = s;
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
    if (l == "horn") return SolverKind::Horn;
    if (l == "olae") return SolverKind::OLAE;
    if (l == "gn" || l == "gauss-newton") return SolverKind::GaussNewton;
    throw RegistrationError(ErrorCode::InvalidArgument, "unknown solver '" + s + "'");
}

SymmetricEigen4 jacobi_eigen(const Mat4& A_in, double tol, int max_sweeps)
{
    Mat4 A = 0.5 * (A_in + A_in.transpose());
    Mat4 V = Mat4::Identity();
    const double scale = std::max(A.norm(), 1e-300);

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += A(p, q) * A(p, q);
        if (std::sqrt(off) <= tol * scale) break;

        for (int p = 0; p < 4; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                // Rotation angle zeroing A(p,q); t = tan(angle), smaller root.
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < 4; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < 4; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < 4; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    SymmetricEigen4 out;
    out.sweeps = sweep;
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return A(i, i) < A(j, j); });
    for (int i = 0; i < 4; ++i) {
        out.values(i)     = A(order[i], order[i]);
        out.vectors.col(i) = V.col(order[i]);
    }
    return out;
}

Mat4 horn_profile_matrix(const Mat3& S)
{
    const double Sxx = S(0, 0), Sxy = S(0, 1), Sxz = S(0, 2);
    const double Syx = S(1, 0), Syy = S(1, 1), Syz = S(1, 2);
    const double Szx = S(2, 0), Szy = S(2, 1), Szz = S(2, 2);

    Mat4 N;
    N << Sxx + Syy + Szz, Syz - Szy, Szx - Sxz, Sxy - Syx,  //
        Syz - Szy, Sxx - Syy - Szz, Sxy + Syx, Szx + Sxz,   //
        Szx - Sxz, Sxy + Syx, -Sxx + Syy - Szz, Syz + Szy,  //
        Sxy - Syx, Szx + Sxz, Syz + Szy, -Sxx - Syy + Szz;
    return N;
}

UnitQuaternion horn_rotation(const UnifiedVectors& uv)
{
    if (uv.size() < 2)
        throw RegistrationError(ErrorCode::DegenerateGeometry, "need at least two vector pairs");

    Mat3 M = Mat3::Zero();
    for (std::size_t i = 0; i < uv.size(); ++i) M += uv.weights[i] * uv.vb[i] * uv.va[i].transpose();

    const auto eig = jacobi_eigen(horn_profile_matrix(M));
    const double top = eig.values(3), second = eig.values(2);
    const double scale = std::max({std::abs(eig.values(0)), std::abs(top), 1e-300});
    if (top - second <= 1e-9 * scale)
        throw RegistrationError(
            ErrorCode::DegenerateGeometry, "dominant eigenvalue is not unique: rotation ambiguous");

    const Vec4 q = eig.vectors.col(3);
    return {q(0), q(1), q(2), q(3)};
}

SolverResult solve_horn(const PairingSet& pairings, const ClosedFormOptions& opts)
{
    const UnifiedVectors uv = build_horn_vectors(pairings, opts.unify);
    const UnitQuaternion q  = horn_rotation(uv);

    SolverResult r;
    r.pose = Pose(q, uv.centroids.a - q.rotate(uv.centroids.b));
    r.inlier_point_indices  = uv.inlier_point_indices;
    r.outlier_point_indices = uv.outlier_point_indices;
    r.diagnostics.method    = SolverKind::Horn;
    return r;
}

SolverResult solve_horn(const PairingSet& pairings, std::optional<double> s_t)
{
    ClosedFormOptions o;
    o.unify.scale_outlier_threshold = s_t;
    return solve_horn(pairings, o);
}

}  // namespace mpreg
