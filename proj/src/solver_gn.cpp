/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   solver_gn.cpp
 * @brief  Gauss-Newton with closed-form Jacobians for every pairing kind.
 */

#include <mpreg/errors.h>
#include <mpreg/robust_kernel.h>
#include <mpreg/solver_gn.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace mpreg {

namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;

constexpr double kMaxCondition = 1e12;

ResidualBlock direction_block(ResidualKind kind, const Vec3& da, const Vec3& Rdb, double w)
{
    ResidualBlock blk;
    blk.kind     = kind;
    blk.weight   = w;
    blk.residual = da - Rdb;
    blk.jacobian.resize(3, 6);
    blk.jacobian.leftCols<3>().setZero();
    blk.jacobian.rightCols<3>() = skew(Rdb);
    return blk;
}

}  // namespace

std::vector<ResidualBlock> residuals_and_jacobian(
    const PairingSet& pairings, const Pose& pose, const KindWeights& kw)
{
    const Mat3 R = pose.rotation_matrix();
    const Vec3& t = pose.translation;

    std::vector<ResidualBlock> blocks;
    blocks.reserve(pairings.size());

    for (const auto& p : pairings.point_pairs) {
        const Vec3 x = R * p.b + t;
        ResidualBlock blk;
        blk.kind     = ResidualKind::PointToPoint;
        blk.weight   = p.weight * kw.points;
        blk.residual = p.a - x;
        blk.jacobian.resize(3, 6);
        blk.jacobian.leftCols<3>()  = -Mat3::Identity();
        blk.jacobian.rightCols<3>() = skew(x);
        blocks.push_back(std::move(blk));
    }
    for (const auto& p : pairings.point_plane_pairs) {
        const Vec3 x  = R * p.b + t;
        const Vec3& n = p.a.normal.dir();
        ResidualBlock blk;
        blk.kind   = ResidualKind::PointToPlane;
        blk.weight = p.weight * kw.planes;
        blk.residual.resize(1);
        blk.residual(0) = n.dot(x - p.a.centroid);
        blk.jacobian.resize(1, 6);
        blk.jacobian.block<1, 3>(0, 0) = n.transpose();
        blk.jacobian.block<1, 3>(0, 3) = x.cross(n).transpose();
        blocks.push_back(std::move(blk));
    }
    for (const auto& p : pairings.plane_pairs)
        blocks.push_back(direction_block(
            ResidualKind::PlaneToPlane, p.a.normal.dir(), R * p.b.normal.dir(),
            p.weight * kw.planes));
    for (const auto& p : pairings.line_pairs)
        blocks.push_back(direction_block(
            ResidualKind::LineToLine, p.a.director.dir(), R * p.b.director.dir(),
            p.weight * kw.lines));

    return blocks;
}

double weighted_cost(const std::vector<ResidualBlock>& blocks)
{
    double c = 0.0;
    for (const auto& b : blocks) c += b.weight * b.residual.squaredNorm();
    return c;
}

SolverResult solve_gn(const PairingSet& pairings, const Pose& initial, const GnOptions& opts)
{
    pairings.validate();
    if (opts.max_iterations < 1 || !(opts.epsilon_step > 0.0))
        throw RegistrationError(ErrorCode::InvalidArgument, "invalid Gauss-Newton options");
    if (pairings.empty())
        throw RegistrationError(ErrorCode::NoCorrespondences, "no pairings to optimize");

    SolverResult res;
    res.diagnostics.method    = SolverKind::GaussNewton;
    res.diagnostics.converged = false;

    Pose pose = initial;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        auto blocks = residuals_and_jacobian(pairings, pose, opts.kind_weights);
        if (opts.robust_delta)
            for (auto& b : blocks) b.weight *= robust_weight(b.residual.norm(), *opts.robust_delta);

        res.diagnostics.cost_trace.push_back(weighted_cost(blocks));

        Mat6 H = Mat6::Zero();
        Vector6 g = Vector6::Zero();
        for (const auto& b : blocks) {
            H.noalias() += b.weight * b.jacobian.transpose() * b.jacobian;
            g.noalias() += b.weight * b.jacobian.transpose() * b.residual;
        }

        const Eigen::SelfAdjointEigenSolver<Mat6> eig(H, Eigen::EigenvaluesOnly);
        const double lmin = eig.eigenvalues()(0), lmax = eig.eigenvalues()(5);
        if (!(lmin > 0.0) || lmax / lmin > kMaxCondition)
            throw RegistrationError(
                ErrorCode::SingularHessian, "J^T W J is singular or ill-conditioned");

        const Vector6 xi = -H.ldlt().solve(g);
        pose = se3_exp(xi) * pose;
        res.diagnostics.iterations = it;
        if (xi.norm() < opts.epsilon_step) {
            res.diagnostics.converged = true;
            break;
        }
    }

    auto blocks = residuals_and_jacobian(pairings, pose, opts.kind_weights);
    if (opts.robust_delta)
        for (auto& b : blocks) b.weight *= robust_weight(b.residual.norm(), *opts.robust_delta);
    res.diagnostics.final_cost = weighted_cost(blocks);
    res.pose = pose;

    res.inlier_point_indices.resize(pairings.point_pairs.size());
    for (std::size_t i = 0; i < pairings.point_pairs.size(); ++i) res.inlier_point_indices[i] = i;
    return res;
}

}  // namespace mpreg
