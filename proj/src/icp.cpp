/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   icp.cpp
 * @brief  ICP loop over point and plane correspondences.
 */

#include <mpreg/errors.h>
#include <mpreg/icp.h>
#include <mpreg/solver_horn.h>
#include <mpreg/solver_olae.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mpreg {

void MetricMap::build_index()
{
    point_index_ = std::make_shared<const KdTree3>(points);
    std::vector<Vec3> centroids;
    centroids.reserve(planes.size());
    for (const auto& p : planes) centroids.push_back(p.centroid);
    plane_index_ = std::make_shared<const KdTree3>(centroids);
}

const KdTree3& MetricMap::point_index() const
{
    if (!point_index_)
        throw RegistrationError(ErrorCode::InvalidArgument, "map has no spatial index");
    return *point_index_;
}

const KdTree3& MetricMap::plane_index() const
{
    if (!plane_index_)
        throw RegistrationError(ErrorCode::InvalidArgument, "map has no spatial index");
    return *plane_index_;
}

void IcpParams::validate() const
{
    const bool ok = max_iterations >= 1 && convergence_epsilon > 0.0 &&
                    max_point_pair_distance > 0.0 &&
                    (!initial_point_pair_distance || *initial_point_pair_distance > 0.0) &&
                    distance_decay > 0.0 && distance_decay <= 1.0 &&
                    plane_normal_max_angle > 0.0 &&
                    plane_normal_max_angle <= std::numbers::pi / 2 &&
                    (!robust_delta || *robust_delta > 0.0) &&
                    (!scale_outlier_threshold || *scale_outlier_threshold > 0.0) &&
                    min_matched_fraction >= 0.0 && min_matched_fraction <= 1.0;
    if (!ok) throw RegistrationError(ErrorCode::InvalidThreshold, "invalid ICP parameters");
}

std::vector<PointPair> match_points(
    const MetricMap& map_a, const MetricMap& map_b, const Pose& pose, double max_dist)
{
    const KdTree3& index = map_a.point_index();
    const double max_d2  = max_dist * max_dist;

    std::vector<PointPair> pairs;
    for (const auto& b : map_b.points) {
        const auto nn = index.nearest(pose.apply(b));
        if (nn && nn->sq_dist <= max_d2) pairs.push_back({map_a.points[nn->index], b, 1.0});
    }
    return pairs;
}

std::vector<PlanePair> match_planes(
    const MetricMap& map_a, const MetricMap& map_b, const Pose& pose, double normal_max_angle)
{
    const KdTree3& index = map_a.plane_index();

    std::vector<PlanePair> pairs;
    for (const auto& pb : map_b.planes) {
        const auto nn = index.nearest(pose.apply(pb.centroid));
        if (!nn) break;
        const Plane& pa  = map_a.planes[nn->index];
        const double cos = std::clamp(pa.normal.dir().dot(pose.rotation.rotate(pb.normal.dir())), -1.0, 1.0);
        if (std::acos(cos) <= normal_max_angle) pairs.push_back({pa, pb, 1.0});
    }
    return pairs;
}

double pose_delta_norm(const Pose& from, const Pose& to)
{
    const Pose d = to * from.inverse();
    return rotation_angle(d.rotation_matrix()) + d.translation.norm();
}

namespace {

SolverResult run_solver(const PairingSet& pairs, const Pose& current, const IcpParams& p)
{
    ClosedFormOptions cf;
    cf.unify.scale_outlier_threshold = p.scale_outlier_threshold;
    cf.unify.kind_weights            = p.kind_weights;
    switch (p.solver) {
        case SolverKind::Horn: return solve_horn(pairs, cf);
        case SolverKind::OLAE: return solve_olae(pairs, cf);
        case SolverKind::GaussNewton: {
            GnOptions gn     = p.gn;
            gn.kind_weights  = p.kind_weights;
            return solve_gn(pairs, current, gn);
        }
    }
    throw RegistrationError(ErrorCode::InvalidArgument, "unknown solver");
}

double rms_distance(const std::vector<PointPair>& pairs, const Pose& pose)
{
    if (pairs.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& p : pairs) acc += (p.a - pose.apply(p.b)).squaredNorm();
    return std::sqrt(acc / static_cast<double>(pairs.size()));
}

}  // namespace

IcpResult icp_align(
    const MetricMap& map_a_in, const MetricMap& map_b, const Pose& initial, const IcpParams& params)
{
    params.validate();

    MetricMap indexed;
    const MetricMap* map_a = &map_a_in;
    if (!map_a_in.has_index()) {
        indexed = map_a_in;
        indexed.build_index();
        map_a = &indexed;
    }

    const bool robust = params.robust_delta.has_value() && params.initial_guess_reliable;

    IcpResult out;
    out.pose = initial;
    double gate = params.initial_point_pair_distance.value_or(params.max_point_pair_distance);
    gate        = std::max(gate, params.max_point_pair_distance);

    std::vector<PointPair> last_points;
    for (std::size_t it = 1; it <= params.max_iterations; ++it) {
        PairingSet pairs;
        pairs.point_pairs = match_points(*map_a, map_b, out.pose, gate);
        pairs.plane_pairs = match_planes(*map_a, map_b, out.pose, params.plane_normal_max_angle);

        double mean = 0.0;
        for (const auto& p : pairs.point_pairs) mean += (p.a - out.pose.apply(p.b)).norm();
        if (!pairs.point_pairs.empty()) mean /= static_cast<double>(pairs.point_pairs.size());
        out.mean_residual_trace.push_back(mean);

        const std::size_t np = pairs.point_pairs.size(), nl = pairs.plane_pairs.size();
        if (np < params.min_point_pairs && !(np >= 1 && nl >= 2))
            throw RegistrationError(
                ErrorCode::NoCorrespondences,
                "icp iteration " + std::to_string(it) + ": " + std::to_string(np) +
                    " point pairs, " + std::to_string(nl) + " plane pairs");

        if (robust) apply_robust_weights(pairs, out.pose, *params.robust_delta);

        SolverResult sr;
        try {
            sr = run_solver(pairs, out.pose, params);
        } catch (const RegistrationError& e) {
            throw RegistrationError(
                e.code(), "icp iteration " + std::to_string(it) + ": " + e.detail());
        }

        const double delta = pose_delta_norm(out.pose, sr.pose);
        out.pose           = sr.pose;
        out.iterations     = it;
        out.point_pairs    = np;
        out.plane_pairs    = nl;
        out.delta_trace.push_back(delta);
        last_points = std::move(pairs.point_pairs);

        if (delta < params.convergence_epsilon) {
            out.converged = true;
            break;
        }
        gate = std::max(params.max_point_pair_distance, gate * params.distance_decay);
    }

    out.final_rms = rms_distance(last_points, out.pose);
    out.matched_fraction =
        map_b.points.empty() ? 0.0
                             : static_cast<double>(out.point_pairs) /
                                   static_cast<double>(map_b.points.size());
    if (out.matched_fraction < params.min_matched_fraction) out.converged = false;
    return out;
}

}  // namespace mpreg
