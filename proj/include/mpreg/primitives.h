/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   primitives.h
 * @brief  Geometric primitives (point, line, plane) and matched pairings.
 */
#pragma once

#include <mpreg/geometry.h>

#include <cstddef>
#include <variant>
#include <vector>

namespace mpreg {

struct Line {
    Vec3 anchor = Vec3::Zero();
    UnitVec3 director{1.0, 0.0, 0.0};
};

struct Plane {
    Vec3 centroid = Vec3::Zero();
    UnitVec3 normal{0.0, 0.0, 1.0};
};

using GeoPrimitive = std::variant<Vec3, Line, Plane>;

enum class PrimitiveKind { Point, Line, Plane };

PrimitiveKind kind_of(const GeoPrimitive& p);

/// Points and anchors/centroids map as R p + t; directions map as R v.
GeoPrimitive transform_primitive(const Pose& pose, const GeoPrimitive& p);
Vec3  transform_primitive(const Pose& pose, const Vec3& p);
Line  transform_primitive(const Pose& pose, const Line& l);
Plane transform_primitive(const Pose& pose, const Plane& p);

template <typename T>
struct Pair {
    T a;
    T b;
    double weight = 1.0;
};

using PointPair = Pair<Vec3>;
using LinePair  = Pair<Line>;
using PlanePair = Pair<Plane>;

/// Point in frame B against a plane in frame A. Only the Gauss-Newton
/// solver consumes these; the closed-form solvers ignore them.
struct PointPlanePair {
    Plane a;
    Vec3 b = Vec3::Zero();
    double weight = 1.0;
};

/** Matched primitives: the i-th `a` (frame A) corresponds to the i-th `b`
 *  (frame B). Solvers estimate the pose T such that a ~= T(b). */
struct PairingSet {
    std::vector<PointPair> point_pairs;
    std::vector<LinePair>  line_pairs;
    std::vector<PlanePair> plane_pairs;
    std::vector<PointPlanePair> point_plane_pairs;

    [[nodiscard]] std::size_t size() const
    {
        return point_pairs.size() + line_pairs.size() + plane_pairs.size() +
               point_plane_pairs.size();
    }
    [[nodiscard]] bool empty() const { return size() == 0; }

    /// Throws InvalidArgument if any weight is not strictly positive.
    void validate() const;
};

}  // namespace mpreg
