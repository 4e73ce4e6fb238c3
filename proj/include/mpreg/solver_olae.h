/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   solver_olae.h
 * @brief  Optimal Linear Attitude Estimator over unified unit vectors.
 *
 * The rotation is recovered as the Gibbs vector g solving Mw g = z, with
 *
 *   B  = sum w vb va^T        z  = -sum w vb x va
 *   S  = B + B^T              p  = tr(B) + 1
 *   Mw = S - p I
 *
 * Gibbs vectors are singular at 180 deg, so the solve is repeated on the
 * systems pre-rotated by 180 deg about x, y and z (obtained in closed form
 * from B) and the one with the largest |det(Mw)| is kept.
 */
#pragma once

#include <mpreg/solver_result.h>

#include <array>
#include <optional>

namespace mpreg {

struct OlaeSystem {
    Mat3 B  = Mat3::Zero();
    Mat3 S  = Mat3::Zero();
    double p = 0.0;
    double m = 0.0;  ///< tr(B) - 1; kept for completeness, unused by the Mw path
    Vec3 z  = Vec3::Zero();
    Mat3 Mw = Mat3::Zero();
};

/// Builds the system from unit vectors whose weights sum to 1.
OlaeSystem attitude_profile(const UnifiedVectors& uv);

/// Fills S, p, m, z and Mw from an attitude profile matrix.
OlaeSystem olae_system_from_profile(const Mat3& B);

/// 180 deg rotation about the given axis (identity for None).
UnitQuaternion sequential_rotation(SequentialAxis axis);

struct SequentialSelection {
    SequentialAxis axis = SequentialAxis::None;
    OlaeSystem system;
    std::array<double, 4> determinants{};  ///< |det(Mw)|: none, x, y, z
};

/// Picks the best-conditioned of the unrotated and x/y/z-rotated systems.
/// Throws DegenerateGeometry if every |det(Mw)| is below 1e-12.
SequentialSelection sequential_rotation_select(const OlaeSystem& sys);

/// Gaussian elimination with partial pivoting. Throws DegenerateGeometry
/// on an exactly singular matrix.
Vec3 solve_linear3(const Mat3& A, const Vec3& b);

SolverResult solve_olae(const PairingSet& pairings, const ClosedFormOptions& opts = {});
SolverResult solve_olae(const PairingSet& pairings, std::optional<double> s_t);

}  // namespace mpreg
