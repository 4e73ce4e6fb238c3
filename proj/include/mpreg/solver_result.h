/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   solver_result.h
 * @brief  Output of the optimal-transformation solvers.
 */
#pragma once

#include <mpreg/geometry.h>
#include <mpreg/unify.h>

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mpreg {

enum class SolverKind { Horn, OLAE, GaussNewton };

std::string to_string(SolverKind k);
/// Accepts "horn", "olae", "gn" (case-insensitive). Throws InvalidArgument.
SolverKind solver_from_string(const std::string& s);

/// Axis of the 180 deg pre-rotation used by OLAE's sequential rotations.
enum class SequentialAxis { None, X, Y, Z };

struct SolverDiagnostics {
    SolverKind method = SolverKind::Horn;
    std::size_t iterations = 0;  ///< 0 for closed-form solvers
    bool converged = true;

    /// OLAE: |det(Mw)| of the unrotated, x-, y- and z-rotated systems.
    std::optional<std::array<double, 4>> determinants;
    std::optional<SequentialAxis> sequential_axis;

    /// Gauss-Newton: weighted cost before each iteration and at the end.
    std::vector<double> cost_trace;
    std::optional<double> final_cost;
};

struct SolverResult {
    Pose pose;
    std::vector<std::size_t> inlier_point_indices;
    std::vector<std::size_t> outlier_point_indices;
    SolverDiagnostics diagnostics;
};

/// Options shared by the closed-form solvers.
struct ClosedFormOptions {
    UnifyOptions unify;
    /// OLAE only: evaluate the x/y/z 180 deg pre-rotated systems too.
    bool sequential_rotations = true;
};

}  // namespace mpreg
