/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   icp.h
 * @brief  Iterative Closest Primitive: nearest-neighbor point matching,
 *         normal-gated plane matching and a pluggable optimal solver.
 */
#pragma once

#include <mpreg/kdtree.h>
#include <mpreg/robust_kernel.h>
#include <mpreg/solver_gn.h>
#include <mpreg/solver_result.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

namespace mpreg {

/** A map of primitives. Nearest-neighbor indices over the points and the
 *  plane centroids are built explicitly with build_index() and shared
 *  (read-only) between copies. */
class MetricMap {
public:
    std::vector<Vec3> points;
    std::vector<Line> lines;
    std::vector<Plane> planes;

    /// (Re)builds the spatial indices; call again after editing the map.
    void build_index();
    [[nodiscard]] bool has_index() const noexcept { return point_index_ != nullptr; }

    /// Throws InvalidArgument if build_index() was not called.
    [[nodiscard]] const KdTree3& point_index() const;
    [[nodiscard]] const KdTree3& plane_index() const;

private:
    std::shared_ptr<const KdTree3> point_index_;
    std::shared_ptr<const KdTree3> plane_index_;
};

struct IcpParams {
    std::size_t max_iterations = 100;
    /// Stop when |log(dR)| + |dt| between consecutive poses drops below.
    double convergence_epsilon = 1e-8;

    /// Point pairs farther apart than this are discarded. When
    /// initial_point_pair_distance is set, the gate starts there and shrinks
    /// by distance_decay per iteration down to this value.
    double max_point_pair_distance = 1.0;
    std::optional<double> initial_point_pair_distance;
    double distance_decay = 0.8;

    double plane_normal_max_angle = 0.35;  ///< radians, in (0, pi/2]

    SolverKind solver = SolverKind::Horn;
    std::optional<double> scale_outlier_threshold;
    KindWeights kind_weights;
    GnOptions gn;

    /// Robust re-weighting of pairs; only applied when the initial guess is
    /// flagged as reliable.
    std::optional<double> robust_delta;
    bool initial_guess_reliable = false;

    /// Fewer point pairs than this (absent >= 2 plane pairs) aborts the run.
    std::size_t min_point_pairs = 3;

    /// A run whose pose stopped moving is still reported as not converged
    /// when fewer than this fraction of b-points found a partner in the
    /// final round (typical of a wrong local minimum).
    double min_matched_fraction = 0.5;

    /// Throws InvalidThreshold for non-positive thresholds.
    void validate() const;
};

struct IcpResult {
    Pose pose;
    std::size_t iterations = 0;
    std::size_t point_pairs = 0;  ///< in the final matching round
    std::size_t plane_pairs = 0;
    bool converged = false;
    std::vector<double> delta_trace;          ///< pose-delta norm per iteration
    std::vector<double> mean_residual_trace;  ///< mean point-pair distance per iteration
    double final_rms = 0.0;       ///< point-pair RMS distance at the final pose
    double matched_fraction = 0.0;  ///< matched b-points / all b-points, final round
};

/// For each b-point (moved by pose), the nearest a-point within max_dist.
std::vector<PointPair> match_points(
    const MetricMap& map_a, const MetricMap& map_b, const Pose& pose, double max_dist);

/// For each b-plane, the a-plane with the nearest centroid, kept when the
/// normals differ by at most normal_max_angle.
std::vector<PlanePair> match_planes(
    const MetricMap& map_a, const MetricMap& map_b, const Pose& pose, double normal_max_angle);

/// Finds T with map_a ~= T(map_b), starting from `initial`.
IcpResult icp_align(
    const MetricMap& map_a, const MetricMap& map_b, const Pose& initial, const IcpParams& params);

/// |log(R_delta)| + |t_delta| for delta = to * from^-1.
double pose_delta_norm(const Pose& from, const Pose& to);

}  // namespace mpreg
