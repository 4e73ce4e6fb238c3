/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   solver_gn.h
 * @brief  Iterative Gauss-Newton baseline on SE(3).
 *
 * Increments are applied on the left, T <- exp(xi) * T, with the tangent
 * ordered as (translation, rotation). Residuals:
 *
 *   point-to-point   a - T(b)                    3 rows
 *   point-to-plane   n_a . (T(b) - c_a)          1 row
 *   plane-to-plane   n_a - R n_b                 3 rows
 *   line-to-line     d_a - R d_b                 3 rows
 */
#pragma once

#include <mpreg/solver_result.h>

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <vector>

namespace mpreg {

struct GnOptions {
    std::size_t max_iterations = 30;
    double epsilon_step = 1e-9;  ///< stop when ||xi|| drops below
    std::optional<double> robust_delta;
    KindWeights kind_weights;
};

enum class ResidualKind { PointToPoint, PointToPlane, PlaneToPlane, LineToLine };

struct ResidualBlock {
    using Residual = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
    using Jacobian = Eigen::Matrix<double, Eigen::Dynamic, 6, 0, 3, 6>;

    ResidualKind kind = ResidualKind::PointToPoint;
    Residual residual;
    Jacobian jacobian;
    double weight = 1.0;
};

std::vector<ResidualBlock> residuals_and_jacobian(
    const PairingSet& pairings, const Pose& pose, const KindWeights& kw = {});

/// Sum of weight * |r|^2 over all blocks.
double weighted_cost(const std::vector<ResidualBlock>& blocks);

/** Throws SingularHessian when J^T W J is singular or its condition number
 *  exceeds 1e12. Hitting the iteration cap is reported through
 *  diagnostics.converged = false, not by throwing. */
SolverResult solve_gn(const PairingSet& pairings, const Pose& initial, const GnOptions& opts = {});

}  // namespace mpreg
