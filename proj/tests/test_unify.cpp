/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include "test_util.h"

#include <mpreg/errors.h>
#include <mpreg/unify.h>

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

namespace mpreg {
namespace {

using test::code_of;

TEST(WeightedCentroids, SinglePair)
{
    const std::vector<PointPair> p{{Vec3(1, 2, 3), Vec3(4, 5, 6), 7.0}};
    const auto c = weighted_centroids(p);
    EXPECT_EQ(c.a, Vec3(1, 2, 3));
    EXPECT_EQ(c.b, Vec3(4, 5, 6));
}

TEST(WeightedCentroids, EqualAndUnequalWeights)
{
    std::vector<PointPair> p{{Vec3(0, 0, 0), Vec3(0, 0, 0), 1.0}, {Vec3(2, 0, 0), Vec3(2, 0, 0), 1.0}};
    EXPECT_LT((weighted_centroids(p).a - Vec3(1, 0, 0)).norm(), 1e-15);

    p = {{Vec3(0, 0, 0), Vec3(0, 0, 0), 1.0}, {Vec3(4, 0, 0), Vec3(4, 0, 0), 3.0}};
    EXPECT_LT((weighted_centroids(p).a - Vec3(3, 0, 0)).norm(), 1e-15);
}

TEST(WeightedCentroids, EmptyThrows)
{
    EXPECT_EQ(code_of([] { weighted_centroids(std::vector<PointPair>{}); }), ErrorCode::EmptyPointSet);
}

TEST(DetectScaleOutliers, RigidPairsNeverFlagged)
{
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        const auto ps = test::make_pairings(rng, test::random_pose(rng), 100, 0);
        const auto c  = weighted_centroids(ps.point_pairs);
        for (double st : {1e-6, 0.01, 0.2, 1.0})
            EXPECT_TRUE(detect_scale_outliers(ps.point_pairs, c, st).empty());
    }
}

TEST(DetectScaleOutliers, RatioThreshold)
{
    const Centroids c{};
    const std::vector<PointPair> flagged{{Vec3(1.0, 0, 0), Vec3(0, 1.3, 0), 1.0}};
    EXPECT_EQ(detect_scale_outliers(flagged, c, 0.2).size(), 1u);

    const std::vector<PointPair> kept{{Vec3(1.0, 0, 0), Vec3(0, 1.1, 0), 1.0}};
    EXPECT_TRUE(detect_scale_outliers(kept, c, 0.2).empty());

    const std::vector<PointPair> at_centroid{{Vec3(0, 0, 0), Vec3(0, 0, 0), 1.0}};
    EXPECT_EQ(detect_scale_outliers(at_centroid, c, 0.2).size(), 1u);
}

TEST(DetectScaleOutliers, InvalidThreshold)
{
    const std::vector<PointPair> p{{Vec3(1, 0, 0), Vec3(1, 0, 0), 1.0}};
    EXPECT_EQ(code_of([&] { detect_scale_outliers(p, {}, 0.0); }), ErrorCode::InvalidThreshold);
    EXPECT_EQ(code_of([&] { detect_scale_outliers(p, {}, -1.0); }), ErrorCode::InvalidThreshold);
}

TEST(DetectScaleOutliers, MonotoneInThreshold)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 2.0);
    auto ps = test::make_pairings(rng, test::random_pose(rng), 200, 0);
    for (auto& p : ps.point_pairs) p.b += Vec3(noise(rng), noise(rng), noise(rng));
    const auto c = weighted_centroids(ps.point_pairs);
    std::size_t prev = ps.point_pairs.size() + 1;
    for (double st = 0.01; st < 2.0; st *= 1.3) {
        const auto f = detect_scale_outliers(ps.point_pairs, c, st);
        EXPECT_LE(f.size(), prev);
        prev = f.size();
    }
}

TEST(BuildHornVectors, PointsOnly)
{
    std::mt19937_64 rng(12);
    const auto ps = test::make_pairings(rng, test::random_pose(rng), 3, 0);
    const auto uv = build_horn_vectors(ps);
    ASSERT_EQ(uv.size(), 3u);
    const auto c = weighted_centroids(ps.point_pairs);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_LT((uv.va[i] - (ps.point_pairs[i].a - c.a)).norm(), 1e-12);
        EXPECT_LT((uv.vb[i] - (ps.point_pairs[i].b - c.b)).norm(), 1e-12);
    }
}

TEST(BuildHornVectors, SinglePointPlusPlanesDropsZeroVector)
{
    std::mt19937_64 rng(13);
    const auto ps = test::make_pairings(rng, test::random_pose(rng), 1, 2);
    const auto uv = build_horn_vectors(ps);
    EXPECT_EQ(uv.size(), 2u);
    EXPECT_EQ(uv.num_point_vectors, 0u);
    EXPECT_EQ(uv.centroids.a, ps.point_pairs[0].a);
    EXPECT_EQ(uv.centroids.b, ps.point_pairs[0].b);
    EXPECT_EQ(uv.inlier_point_indices, std::vector<std::size_t>{0});
    // Still fine with the outlier test enabled.
    EXPECT_EQ(build_horn_vectors(ps, 0.2).size(), 2u);
}

TEST(BuildHornVectors, FlagsGrossOutliers)
{
    std::mt19937_64 rng(14);
    auto ps = test::make_pairings(rng, test::random_pose(rng), 100, 0);
    const double diameter = 50.0 * std::sqrt(3.0);
    std::set<std::size_t> injected;
    for (std::size_t i = 0; i < 10; ++i) {
        const std::size_t k = 100 + i;
        const Vec3 b = test::random_in_cube(rng);
        ps.point_pairs.push_back({ps.point_pairs[i].a, b + 5.0 * diameter * test::random_unit(rng), 1.0});
        injected.insert(k);
    }
    const auto uv = build_horn_vectors(ps, 0.2);
    const std::set<std::size_t> flagged(uv.outlier_point_indices.begin(), uv.outlier_point_indices.end());
    EXPECT_EQ(flagged, injected);

    // Brute-force re-evaluation of the ratio test at the final centroids.
    for (std::size_t i = 0; i < ps.point_pairs.size(); ++i) {
        const double na = (ps.point_pairs[i].a - uv.centroids.a).norm();
        const double nb = (ps.point_pairs[i].b - uv.centroids.b).norm();
        const bool out = std::max(na, nb) / std::min(na, nb) - 1.0 >= 0.2;
        EXPECT_EQ(out, injected.count(i) == 1) << i;
    }
}

TEST(BuildHornVectors, PointVectorsSumToZero)
{
    std::mt19937_64 rng(15);
    auto ps = test::make_pairings(rng, test::random_pose(rng), 50, 5);
    std::uniform_real_distribution<double> w(0.1, 5.0);
    for (auto& p : ps.point_pairs) p.weight = w(rng);
    const auto uv = build_horn_vectors(ps);
    Vec3 sum = Vec3::Zero();
    double scale = 0.0;
    for (std::size_t i = 0; i < uv.num_point_vectors; ++i) {
        sum += uv.weights[i] * uv.va[i];
        scale += uv.weights[i] * uv.va[i].norm();
    }
    EXPECT_LT(sum.norm(), 1e-9 * scale);
}

TEST(BuildHornVectors, Errors)
{
    std::mt19937_64 rng(16);
    const auto planes_only = test::make_pairings(rng, Pose::identity(), 0, 5);
    EXPECT_EQ(code_of([&] { build_horn_vectors(planes_only); }), ErrorCode::EmptyPointSet);

    const auto ps = test::make_pairings(rng, Pose::identity(), 5, 0);
    EXPECT_EQ(code_of([&] { build_horn_vectors(ps, 0.0); }), ErrorCode::InvalidThreshold);

    PairingSet collinear;
    for (int i = 0; i < 5; ++i)
        collinear.point_pairs.push_back({Vec3(i, 0, 0), Vec3(i, 0, 0), 1.0});
    EXPECT_EQ(code_of([&] { build_horn_vectors(collinear); }), ErrorCode::DegenerateGeometry);

    PairingSet bad_weight = ps;
    bad_weight.point_pairs[0].weight = 0.0;
    EXPECT_EQ(code_of([&] { build_horn_vectors(bad_weight); }), ErrorCode::InvalidArgument);
}

TEST(BuildOlaeUnitVectors, NormalizesPoints)
{
    PairingSet ps;
    ps.point_pairs = {{Vec3(2, 0, 0), Vec3(0, 2, 0), 1.0}, {Vec3(-2, 0, 0), Vec3(0, -2, 0), 1.0}};
    ps.plane_pairs = {{Plane{Vec3::Zero(), UnitVec3(0, 0, 1)}, Plane{Vec3::Zero(), UnitVec3(0, 0, 1)}, 1.0}};
    const auto uv = build_olae_unit_vectors(ps);
    ASSERT_EQ(uv.size(), 3u);
    EXPECT_LT((uv.va[0] - Vec3(1, 0, 0)).norm(), 1e-15);
    EXPECT_LT((uv.vb[0] - Vec3(0, 1, 0)).norm(), 1e-15);
}

TEST(BuildOlaeUnitVectors, PlaneNormalsPassThroughBitIdentical)
{
    std::mt19937_64 rng(17);
    const auto ps = test::make_pairings(rng, test::random_pose(rng), 4, 6, 3);
    const auto uv = build_olae_unit_vectors(ps);
    const std::size_t off = uv.num_point_vectors;
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(uv.va[off + i], ps.line_pairs[i].a.director.dir());
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(uv.va[off + 3 + i], ps.plane_pairs[i].a.normal.dir());
        EXPECT_EQ(uv.vb[off + 3 + i], ps.plane_pairs[i].b.normal.dir());
    }
}

TEST(BuildOlaeUnitVectors, MixedCountAndUnitNorm)
{
    std::mt19937_64 rng(18);
    const auto ps = test::make_pairings(rng, test::random_pose(rng), 5, 5);
    const auto uv = build_olae_unit_vectors(ps);
    EXPECT_EQ(uv.size(), 10u);
    for (std::size_t i = 0; i < uv.size(); ++i) {
        EXPECT_NEAR(uv.va[i].norm(), 1.0, 1e-12);
        EXPECT_NEAR(uv.vb[i].norm(), 1.0, 1e-12);
    }

    // One of the five points sits exactly at the centroid.
    PairingSet centred = ps;
    const std::vector<Vec3> b{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 0}};
    for (std::size_t i = 0; i < 5; ++i) centred.point_pairs[i] = {b[i], b[i], 1.0};
    EXPECT_EQ(build_olae_unit_vectors(centred).size(), 9u);
}

TEST(BuildVectors, WeightsNormalizedAndKindScaled)
{
    std::mt19937_64 rng(19);
    const auto ps = test::make_pairings(rng, test::random_pose(rng), 4, 4);
    UnifyOptions o;
    o.kind_weights.planes = 3.0;
    const auto uv = build_olae_unit_vectors(ps, o);
    double sum = 0.0;
    for (double w : uv.weights) sum += w;
    EXPECT_NEAR(sum, 1.0, 1e-15);
    EXPECT_NEAR(uv.weights.back() / uv.weights.front(), 3.0, 1e-12);
}

TEST(BuildVectors, PermutationInvariant)
{
    std::mt19937_64 rng(20);
    const auto ps = test::make_pairings(rng, test::random_pose(rng), 30, 10, 5);
    PairingSet shuffled = ps;
    std::shuffle(shuffled.point_pairs.begin(), shuffled.point_pairs.end(), rng);
    std::shuffle(shuffled.plane_pairs.begin(), shuffled.plane_pairs.end(), rng);
    std::shuffle(shuffled.line_pairs.begin(), shuffled.line_pairs.end(), rng);

    for (bool unit : {false, true}) {
        const auto u1 = unit ? build_olae_unit_vectors(ps) : build_horn_vectors(ps);
        const auto u2 = unit ? build_olae_unit_vectors(shuffled) : build_horn_vectors(shuffled);
        ASSERT_EQ(u1.size(), u2.size());
        EXPECT_LT((u1.centroids.a - u2.centroids.a).norm(), 1e-12);
        auto key = [](const UnifiedVectors& u) {
            std::vector<std::array<double, 6>> k;
            for (std::size_t i = 0; i < u.size(); ++i)
                k.push_back({std::round(u.va[i].x() * 1e9), std::round(u.va[i].y() * 1e9),
                             std::round(u.va[i].z() * 1e9), std::round(u.vb[i].x() * 1e9),
                             std::round(u.vb[i].y() * 1e9), std::round(u.vb[i].z() * 1e9)});
            std::sort(k.begin(), k.end());
            return k;
        };
        EXPECT_EQ(key(u1), key(u2));
    }
}

TEST(CanonicalizeLineDirection, FollowsDotProductSign)
{
    const Line l{Vec3(0, 0, 5), UnitVec3(0, 0, 1)};
    // Anchor lies ahead of the viewpoint along +z: keep.
    EXPECT_EQ(canonicalize_line_direction(l, Vec3(1, 0, 0)).director.dir(), Vec3(0, 0, 1));
    // Viewpoint beyond the anchor: director flips.
    EXPECT_EQ(canonicalize_line_direction(l, Vec3(1, 0, 10)).director.dir(), Vec3(0, 0, -1));
}

TEST(CanonicalizeLineDirection, IdempotentUnderFlip)
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const Line l{test::random_in_cube(rng), UnitVec3(test::random_unit(rng))};
        const Line f{l.anchor, l.director.flipped()};
        const Vec3 vp = test::random_in_cube(rng);
        EXPECT_EQ(canonicalize_line_direction(l, vp).director.dir(),
                  canonicalize_line_direction(f, vp).director.dir());
    }
}

TEST(CanonicalizeLineDirection, TieKeepsInput)
{
    // Ray to the anchor is perpendicular to the line.
    const Line l{Vec3(0, 0, 0), UnitVec3(0, 0, -1)};
    EXPECT_EQ(canonicalize_line_direction(l, Vec3(3, 0, 0)).director.dir(), Vec3(0, 0, -1));
}

TEST(CanonicalizeLineDirection, ViewpointOnLineThrows)
{
    const Line l{Vec3(0, 0, 0), UnitVec3(0, 0, 1)};
    EXPECT_EQ(code_of([&] { canonicalize_line_direction(l, Vec3(0, 0, 7)); }),
              ErrorCode::DegenerateViewpoint);
}

}  // namespace
}  // namespace mpreg
