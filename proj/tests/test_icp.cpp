/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include "test_util.h"

#include <mpreg/bench/benchmarks.h>
#include <mpreg/bench/scene.h>
#include <mpreg/errors.h>
#include <mpreg/icp.h>
#include <mpreg/kdtree.h>
#include <mpreg/robust_kernel.h>

#include <gtest/gtest.h>

#include <limits>

using namespace mpreg;
using namespace mpreg::test;

namespace {

// Brute-force nearest neighbour, lowest index on ties.
std::pair<std::size_t, double> brute_nn(const std::vector<Vec3>& pts, const Vec3& q)
{
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = (pts[i] - q).squaredNorm();
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return {best, bd};
}

MetricMap cloud(std::mt19937_64& rng, std::size_t n)
{
    MetricMap m;
    for (std::size_t i = 0; i < n; ++i) m.points.push_back(random_in_cube(rng, 0.0, 10.0));
    return m;
}

}  // namespace

TEST(KdTree, MatchesBruteForceOnRandomClouds)
{
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        const MetricMap m = cloud(rng, 1000);
        const KdTree3 tree(m.points);
        for (int k = 0; k < 2000; ++k) {
            const Vec3 q = random_in_cube(rng, -2.0, 12.0);
            const auto nn = tree.nearest(q);
            ASSERT_TRUE(nn);
            const auto [bi, bd] = brute_nn(m.points, q);
            ASSERT_EQ(nn->index, bi);
            ASSERT_EQ(nn->sq_dist, bd);
        }
    }
}

TEST(KdTree, TiesGoToLowestIndex)
{
    // Integer lattice with duplicates: many equidistant candidates.
    std::vector<Vec3> pts;
    for (int rep = 0; rep < 2; ++rep)
        for (int x = 0; x < 6; ++x)
            for (int y = 0; y < 6; ++y)
                for (int z = 0; z < 6; ++z) pts.emplace_back(x, y, z);
    const KdTree3 tree(pts, 3);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> u(0, 10);
    for (int k = 0; k < 3000; ++k) {
        const Vec3 q(0.5 * u(rng), 0.5 * u(rng), 0.5 * u(rng));
        const auto nn = tree.nearest(q);
        ASSERT_TRUE(nn);
        ASSERT_EQ(nn->index, brute_nn(pts, q).first);
    }
}

TEST(KdTree, EmptyAndSingle)
{
    const std::vector<Vec3> none;
    EXPECT_FALSE(KdTree3(none).nearest(Vec3::Zero()));
    const std::vector<Vec3> one{Vec3(1, 2, 3)};
    const auto nn = KdTree3(one).nearest(Vec3::Zero());
    ASSERT_TRUE(nn);
    EXPECT_EQ(nn->index, 0u);
    EXPECT_DOUBLE_EQ(nn->sq_dist, 14.0);
}

TEST(MatchPoints, IdenticalCloudsPairWithThemselves)
{
    std::mt19937_64 rng(5);
    MetricMap a = cloud(rng, 300);
    a.build_index();
    const auto pairs = match_points(a, a, Pose::identity(), 0.5);
    ASSERT_EQ(pairs.size(), a.points.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        EXPECT_EQ(pairs[i].a, a.points[i]);
        EXPECT_EQ(pairs[i].b, a.points[i]);
    }
}

TEST(MatchPoints, FarPointIsDropped)
{
    MetricMap a, b;
    a.points = {Vec3(0, 0, 0), Vec3(10, 0, 0)};
    b.points = {Vec3(0.1, 0, 0), Vec3(5.1, 0, 0)};
    a.build_index();
    const auto pairs = match_points(a, b, Pose::identity(), 1.0);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].a, Vec3(0, 0, 0));
    EXPECT_EQ(pairs[0].b, Vec3(0.1, 0, 0));
}

TEST(MatchPoints, EqualsBruteForceUnderPose)
{
    std::mt19937_64 rng(8);
    MetricMap a = cloud(rng, 1000);
    const MetricMap b = cloud(rng, 1000);
    a.build_index();
    const Pose T(UnitQuaternion::from_axis_angle(Vec3(1, 2, 3), 0.3), Vec3(0.5, -0.2, 0.1));
    const double gate = 0.4;
    const auto pairs = match_points(a, b, T, gate);
    std::size_t k = 0;
    for (const auto& pb : b.points) {
        const auto [bi, bd] = brute_nn(a.points, T.apply(pb));
        if (std::sqrt(bd) > gate) continue;
        ASSERT_LT(k, pairs.size());
        EXPECT_EQ(pairs[k].a, a.points[bi]);
        EXPECT_EQ(pairs[k].b, pb);
        ++k;
    }
    EXPECT_EQ(k, pairs.size());
}

TEST(MatchPlanes, AngleGate)
{
    MetricMap a, b;
    a.planes = {Plane{Vec3(0, 0, 0), UnitVec3(Vec3::UnitZ())}, Plane{Vec3(5, 0, 0), UnitVec3(Vec3::UnitX())}};
    b.planes = a.planes;
    a.build_index();
    EXPECT_EQ(match_planes(a, b, Pose::identity(), 0.35).size(), 2u);

    // Tilt the first b-plane by 0.5 rad: beyond the 0.35 rad gate.
    b.planes[0].normal = UnitVec3(Vec3(0, std::sin(0.5), std::cos(0.5)));
    const auto pairs = match_planes(a, b, Pose::identity(), 0.35);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].a.centroid, Vec3(5, 0, 0));

    // Opposite normals never match.
    b.planes = {Plane{Vec3(0, 0, 0), UnitVec3(-Vec3::UnitZ())}};
    EXPECT_TRUE(match_planes(a, b, Pose::identity(), 0.35).empty());
}

TEST(MatchPlanes, EqualsBruteForce)
{
    std::mt19937_64 rng(21);
    MetricMap a, b;
    for (int i = 0; i < 200; ++i) {
        a.planes.push_back(Plane{random_in_cube(rng, 0, 10), UnitVec3(random_unit(rng))});
        b.planes.push_back(Plane{random_in_cube(rng, 0, 10), UnitVec3(random_unit(rng))});
    }
    a.build_index();
    const Pose T(UnitQuaternion::from_axis_angle(Vec3(0, 1, 1), 0.2), Vec3(0.3, 0, 0));
    const double max_angle = 1.0;
    const auto pairs = match_planes(a, b, T, max_angle);
    std::size_t k = 0;
    for (const auto& pb : b.planes) {
        const Plane m = transform_primitive(T, pb);
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < a.planes.size(); ++i) {
            const double d = (a.planes[i].centroid - m.centroid).squaredNorm();
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        const double ang = std::acos(std::clamp(a.planes[best].normal.dir().dot(m.normal.dir()), -1.0, 1.0));
        if (ang > max_angle) continue;
        ASSERT_LT(k, pairs.size());
        EXPECT_EQ(pairs[k].a.centroid, a.planes[best].centroid);
        EXPECT_EQ(pairs[k].b.centroid, pb.centroid);
        ++k;
    }
    EXPECT_EQ(k, pairs.size());
}

TEST(RobustWeight, Values)
{
    EXPECT_EQ(robust_weight(0.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(robust_weight(2.0, 2.0), 0.5);
    EXPECT_DOUBLE_EQ(robust_weight(3.0, 1.0), 0.1);
    EXPECT_EQ(code_of([] { robust_weight(1.0, 0.0); }), ErrorCode::InvalidThreshold);
    EXPECT_EQ(code_of([] { robust_weight(1.0, -1.0); }), ErrorCode::InvalidThreshold);
}

TEST(RobustWeight, MonotoneAndBounded)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 100.0), ud(0.01, 10.0);
    for (int k = 0; k < 10000; ++k) {
        const double d = ud(rng);
        double r1 = u(rng), r2 = u(rng);
        if (r1 > r2) std::swap(r1, r2);
        const double w1 = robust_weight(r1, d), w2 = robust_weight(r2, d);
        ASSERT_GT(w2, 0.0);
        ASSERT_LE(w1, 1.0);
        ASSERT_GE(w1, w2);
        if (r1 > 0.0) {
            ASSERT_LT(w1, 1.0);
        }
    }
}

TEST(RobustWeight, ExactPairsKeepTheirWeight)
{
    std::mt19937_64 rng(4);
    const Pose gt = random_pose(rng);
    PairingSet p = make_pairings(rng, gt, 10, 3, 2);
    apply_robust_weights(p, gt, 1.0);
    for (const auto& q : p.point_pairs) EXPECT_NEAR(q.weight, 1.0, 1e-12);
    for (const auto& q : p.plane_pairs) EXPECT_NEAR(q.weight, 1.0, 1e-12);
    for (const auto& q : p.line_pairs) EXPECT_NEAR(q.weight, 1.0, 1e-12);

    p.point_pairs[0].b += Vec3(0, 0, 100);
    apply_robust_weights(p, gt, 1.0);
    EXPECT_LT(p.point_pairs[0].weight, 1e-3);
}

class IcpSolvers : public ::testing::TestWithParam<SolverKind> {};

TEST_P(IcpSolvers, SelfAlignmentConvergesInOneIteration)
{
    MetricMap a = bench::synthetic_model(1000, 1);
    a.build_index();
    const auto r = icp_align(a, a, Pose::identity(), bench::harness_icp_params(a, GetParam()));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_LT(rotation_error(r.pose.rotation_matrix(), Mat3::Identity()), 1e-12);
    EXPECT_LT(r.pose.translation.norm(), 1e-12);
    EXPECT_DOUBLE_EQ(r.matched_fraction, 1.0);
}

TEST_P(IcpSolvers, RecoversOffsetWithinBasin)
{
    MetricMap a = bench::synthetic_model(1000, 2);
    a.build_index();
    const double b = bench::bbox_size(a.points);
    const auto params = bench::harness_icp_params(a, GetParam());
    int ok = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Pose gt = bench::random_icp_offset(100 + s, 0.25 * b, 20.0 * kPi / 180.0);
        MetricMap moved;
        for (const auto& p : a.points) moved.points.push_back(gt.inverse().apply(p));
        const auto r = icp_align(a, moved, Pose::identity(), params);
        EXPECT_LE(r.iterations, params.max_iterations);
        if (rotation_error(r.pose.rotation_matrix(), gt.rotation_matrix()) < 1e-3 &&
            translation_error(r.pose.translation, gt.translation) < 1e-3 * b)
            ++ok;
    }
    EXPECT_GE(ok, 8);
}

TEST_P(IcpSolvers, HalfTurnIsReportedAsNotConverged)
{
    MetricMap a = bench::synthetic_model(1000, 7);
    a.build_index();
    Vec3 c = Vec3::Zero();
    for (const auto& p : a.points) c += p;
    c /= static_cast<double>(a.points.size());
    const auto q = UnitQuaternion::from_axis_angle(Vec3::UnitZ(), kPi);
    const Pose flip(q, c - q.rotate(c));
    MetricMap b;
    for (const auto& p : a.points) b.points.push_back(flip.inverse().apply(p));

    try {
        const auto r = icp_align(a, b, Pose::identity(), bench::harness_icp_params(a, GetParam()));
        EXPECT_FALSE(r.converged);
        EXPECT_GT(rotation_error(r.pose.rotation_matrix(), flip.rotation_matrix()), 0.1);
        EXPECT_LT(r.matched_fraction, 0.5);
    } catch (const RegistrationError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoCorrespondences);
    }
}

TEST_P(IcpSolvers, DeterministicAndResidualNonIncreasing)
{
    MetricMap a = bench::synthetic_model(800, 3);
    a.build_index();
    const double b = bench::bbox_size(a.points);
    const Pose gt = bench::random_icp_offset(9, 0.25 * b, 20.0 * kPi / 180.0);
    MetricMap moved;
    for (const auto& p : a.points) moved.points.push_back(gt.inverse().apply(p));

    // Fixed gate, so every round sees the same pairing rule.
    IcpParams params = bench::harness_icp_params(a, GetParam());
    params.max_point_pair_distance = b;
    params.initial_point_pair_distance.reset();

    const auto r1 = icp_align(a, moved, Pose::identity(), params);
    const auto r2 = icp_align(a, moved, Pose::identity(), params);
    EXPECT_EQ(r1.pose.translation, r2.pose.translation);
    EXPECT_EQ(r1.pose.rotation.qr(), r2.pose.rotation.qr());
    EXPECT_EQ(r1.delta_trace, r2.delta_trace);
    for (std::size_t i = 1; i < r1.mean_residual_trace.size(); ++i)
        EXPECT_LE(r1.mean_residual_trace[i], r1.mean_residual_trace[i - 1] * (1 + 1e-9) + 1e-15) << "round " << i;
}

INSTANTIATE_TEST_SUITE_P(All, IcpSolvers,
                         ::testing::Values(SolverKind::Horn, SolverKind::OLAE, SolverKind::GaussNewton),
                         [](const auto& info) { return to_string(info.param); });

TEST(Icp, TooFewPairsThrowsNoCorrespondences)
{
    MetricMap a, b;
    a.points = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    b.points = {Vec3(50, 0, 0), Vec3(51, 0, 0), Vec3(50, 1, 0)};
    IcpParams p;
    p.max_point_pair_distance = 1.0;
    EXPECT_EQ(code_of([&] { icp_align(a, b, Pose::identity(), p); }), ErrorCode::NoCorrespondences);
}

TEST(Icp, InvalidParamsRejected)
{
    MetricMap a;
    a.points = {Vec3(0, 0, 0)};
    IcpParams p;
    p.plane_normal_max_angle = 2.0;
    EXPECT_EQ(code_of([&] { icp_align(a, a, Pose::identity(), p); }), ErrorCode::InvalidThreshold);
    p = IcpParams{};
    p.max_point_pair_distance = 0.0;
    EXPECT_EQ(code_of([&] { icp_align(a, a, Pose::identity(), p); }), ErrorCode::InvalidThreshold);
}

TEST(Icp, MapIndexRequiredForAccessors)
{
    MetricMap a;
    EXPECT_EQ(code_of([&] { (void)a.point_index(); }), ErrorCode::InvalidArgument);
}
