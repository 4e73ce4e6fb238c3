/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   unify.h
 * @brief  Converts heterogeneous primitive pairings into the paired vector
 *         lists consumed by the closed-form rotation solvers.
 *
 * Points contribute centroid-relative vectors, lines their directors and
 * planes their normals. For the attitude (OLAE) solver the point vectors
 * are additionally normalized to unit length.
 */
#pragma once

#include <mpreg/primitives.h>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mpreg {

/// Relative importance of each primitive kind, multiplied into the
/// per-pair weights before the final normalization to sum 1.
struct KindWeights {
    double points = 1.0;
    double lines  = 1.0;
    double planes = 1.0;
};

struct UnifyOptions {
    /// Scale-mismatch outlier threshold s_t; disabled when empty.
    std::optional<double> scale_outlier_threshold;
    KindWeights kind_weights;
};

struct Centroids {
    Vec3 a = Vec3::Zero();
    Vec3 b = Vec3::Zero();
};

struct UnifiedVectors {
    std::vector<Vec3> va;
    std::vector<Vec3> vb;
    std::vector<double> weights;  ///< sums to 1
    Centroids centroids;          ///< over inlier point pairs
    std::vector<std::size_t> inlier_point_indices;
    std::vector<std::size_t> outlier_point_indices;
    std::size_t num_point_vectors = 0;  ///< leading entries derived from points

    [[nodiscard]] std::size_t size() const { return va.size(); }
};

/// Weighted centroids of both clouds. Throws EmptyPointSet when empty.
Centroids weighted_centroids(std::span<const PointPair> pairs);
Centroids weighted_centroids(
    std::span<const PointPair> pairs, std::span<const std::size_t> subset);

/** Indices of pairs failing the scale-mismatch test
 *    max(|va|,|vb|) / min(|va|,|vb|) - 1 < s_t
 *  with va, vb relative to the given centroids. Pairs whose smaller norm is
 *  below 1e-9 are flagged as well. Throws InvalidThreshold if s_t <= 0. */
std::vector<std::size_t> detect_scale_outliers(
    std::span<const PointPair> pairs, const Centroids& c, double s_t);

/// Vector lists for Horn's method (points keep their full length).
UnifiedVectors build_horn_vectors(const PairingSet& pairings, const UnifyOptions& opts = {});
UnifiedVectors build_horn_vectors(const PairingSet& pairings, std::optional<double> s_t);

/// Unit-vector lists for attitude estimators (OLAE / Wahba solvers).
UnifiedVectors build_olae_unit_vectors(const PairingSet& pairings, const UnifyOptions& opts = {});
UnifiedVectors build_olae_unit_vectors(const PairingSet& pairings, std::optional<double> s_t);

/** Orients the line director so it points away from the viewpoint, i.e.
 *  makes an angle below pi/2 with the ray from the viewpoint to the line
 *  anchor. Kept as given when that angle is pi/2 within 1e-12.
 *  Throws DegenerateViewpoint if the viewpoint lies on the line. */
Line canonicalize_line_direction(const Line& line, const Vec3& viewpoint);

}  // namespace mpreg
