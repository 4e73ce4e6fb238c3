/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   solver_horn.h
 * @brief  Horn's optimal quaternion over unified point/line/plane vectors.
 */
#pragma once

#include <mpreg/solver_result.h>

#include <Eigen/Core>
#include <optional>

namespace mpreg {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

struct SymmetricEigen4 {
    Vec4 values;   ///< ascending
    Mat4 vectors;  ///< column i pairs with values(i)
    int sweeps = 0;
};

/// Cyclic Jacobi eigen-decomposition of a symmetric 4x4 matrix.
SymmetricEigen4 jacobi_eigen(const Mat4& A, double tol = 1e-12, int max_sweeps = 30);

/// Horn's symmetric 4x4 matrix for the cross-covariance
/// M = sum w vb va^T (so that q^T N q = sum w va . R(q) vb).
Mat4 horn_profile_matrix(const Mat3& M);

/// Rotation maximizing sum w va . (R vb). Throws DegenerateGeometry when the
/// dominant eigenvalue is not unique.
UnitQuaternion horn_rotation(const UnifiedVectors& uv);

SolverResult solve_horn(const PairingSet& pairings, const ClosedFormOptions& opts = {});
SolverResult solve_horn(const PairingSet& pairings, std::optional<double> s_t);

}  // namespace mpreg
