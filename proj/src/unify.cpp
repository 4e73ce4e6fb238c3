/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   unify.cpp
 * @brief  Pairing unification and scale-based outlier rejection.
 */

#include <mpreg/errors.h>
#include <mpreg/unify.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpreg {

namespace {

constexpr double kMinPointVectorNorm = 1e-9;

// Sine of the angle below which two directions count as parallel.
constexpr double kParallelSine = 1e-9;

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& sorted_out)
{
    std::vector<std::size_t> in;
    in.reserve(n - sorted_out.size());
    auto it = sorted_out.begin();
    for (std::size_t i = 0; i < n; ++i) {
        if (it != sorted_out.end() && *it == i) {
            ++it;
            continue;
        }
        in.push_back(i);
    }
    return in;
}

void require_spanning(const std::vector<Vec3>& v)
{
    if (v.empty())
        throw RegistrationError(ErrorCode::DegenerateGeometry, "no usable vector pairs");

    std::size_t longest = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i].squaredNorm() > v[longest].squaredNorm()) longest = i;

    const Vec3 u = v[longest].normalized();
    for (const auto& w : v) {
        const double n = w.norm();
        if (n > 0.0 && u.cross(w).norm() / n > kParallelSine) return;
    }
    throw RegistrationError(
        ErrorCode::DegenerateGeometry, "fewer than two non-parallel vectors: rotation unobservable");
}

UnifiedVectors build_vectors(const PairingSet& pairings, const UnifyOptions& opts, bool unit)
{
    pairings.validate();
    const auto& pts = pairings.point_pairs;
    if (pts.empty())
        throw RegistrationError(
            ErrorCode::EmptyPointSet, "at least one point pair is required for translation");

    UnifiedVectors out;
    std::vector<std::size_t> inliers(pts.size());
    std::iota(inliers.begin(), inliers.end(), std::size_t{0});

    // A lone point pair coincides with its own centroid, so the scale test
    // is undefined; it is only run with two or more point pairs.
    if (opts.scale_outlier_threshold && pts.size() >= 2) {
        const double s_t = *opts.scale_outlier_threshold;
        auto flagged     = detect_scale_outliers(pts, weighted_centroids(pts), s_t);
        auto first_pass  = complement(pts.size(), flagged);
        if (first_pass.empty())
            throw RegistrationError(ErrorCode::EmptyPointSet, "all point pairs flagged as outliers");
        // Second pass against the centroids of the first-pass inliers.
        flagged = detect_scale_outliers(pts, weighted_centroids(pts, first_pass), s_t);
        inliers = complement(pts.size(), flagged);
        if (inliers.empty())
            throw RegistrationError(ErrorCode::EmptyPointSet, "all point pairs flagged as outliers");
        out.outlier_point_indices = std::move(flagged);
    } else if (opts.scale_outlier_threshold && !(*opts.scale_outlier_threshold > 0.0)) {
        throw RegistrationError(ErrorCode::InvalidThreshold, "s_t must be positive");
    }

    out.centroids = weighted_centroids(pts, inliers);
    out.inlier_point_indices = inliers;

    const KindWeights& kw = opts.kind_weights;
    auto push = [&](const Vec3& a, const Vec3& b, double w) {
        out.va.push_back(a);
        out.vb.push_back(b);
        out.weights.push_back(w);
    };

    for (std::size_t i : inliers) {
        Vec3 a = pts[i].a - out.centroids.a;
        Vec3 b = pts[i].b - out.centroids.b;
        const double na = a.norm(), nb = b.norm();
        if (na < kMinPointVectorNorm || nb < kMinPointVectorNorm) continue;
        if (unit) {
            a /= na;
            b /= nb;
        }
        push(a, b, pts[i].weight * kw.points);
    }
    out.num_point_vectors = out.va.size();

    for (const auto& lp : pairings.line_pairs)
        push(lp.a.director.dir(), lp.b.director.dir(), lp.weight * kw.lines);
    for (const auto& pp : pairings.plane_pairs)
        push(pp.a.normal.dir(), pp.b.normal.dir(), pp.weight * kw.planes);

    const double wsum = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
    if (wsum > 0.0)
        for (auto& w : out.weights) w /= wsum;

    require_spanning(out.va);
    return out;
}

}  // namespace

Centroids weighted_centroids(std::span<const PointPair> pairs)
{
    std::vector<std::size_t> all(pairs.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return weighted_centroids(pairs, all);
}

Centroids weighted_centroids(std::span<const PointPair> pairs, std::span<const std::size_t> subset)
{
    if (subset.empty())
        throw RegistrationError(ErrorCode::EmptyPointSet, "no point pairs to average");
    Centroids c;
    double wsum = 0.0;
    for (std::size_t i : subset) {
        const auto& p = pairs[i];
        c.a += p.weight * p.a;
        c.b += p.weight * p.b;
        wsum += p.weight;
    }
    if (!(wsum > 0.0))
        throw RegistrationError(ErrorCode::InvalidArgument, "point weights must be positive");
    c.a /= wsum;
    c.b /= wsum;
    return c;
}

std::vector<std::size_t> detect_scale_outliers(
    std::span<const PointPair> pairs, const Centroids& c, double s_t)
{
    if (!(s_t > 0.0))
        throw RegistrationError(ErrorCode::InvalidThreshold, "s_t must be positive");

    std::vector<std::size_t> flagged;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double na = (pairs[i].a - c.a).norm();
        const double nb = (pairs[i].b - c.b).norm();
        const double lo = std::min(na, nb), hi = std::max(na, nb);
        if (lo < kMinPointVectorNorm || hi / lo - 1.0 >= s_t) flagged.push_back(i);
    }
    return flagged;
}

UnifiedVectors build_horn_vectors(const PairingSet& pairings, const UnifyOptions& opts)
{
    return build_vectors(pairings, opts, false);
}

UnifiedVectors build_horn_vectors(const PairingSet& pairings, std::optional<double> s_t)
{
    return build_vectors(pairings, {.scale_outlier_threshold = s_t, .kind_weights = {}}, false);
}

UnifiedVectors build_olae_unit_vectors(const PairingSet& pairings, const UnifyOptions& opts)
{
    return build_vectors(pairings, opts, true);
}

UnifiedVectors build_olae_unit_vectors(const PairingSet& pairings, std::optional<double> s_t)
{
    return build_vectors(pairings, {.scale_outlier_threshold = s_t, .kind_weights = {}}, true);
}

Line canonicalize_line_direction(const Line& line, const Vec3& viewpoint)
{
    const Vec3& d   = line.director.dir();
    const Vec3 ray  = line.anchor - viewpoint;
    const double off_line = ray.cross(d).norm();
    if (off_line < 1e-12)
        throw RegistrationError(ErrorCode::DegenerateViewpoint, "viewpoint lies on the line");

    const double cos_angle = d.dot(ray) / ray.norm();
    if (cos_angle < -1e-12) return {line.anchor, line.director.flipped()};
    return line;
}

}  // namespace mpreg
