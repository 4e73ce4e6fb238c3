/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include <mpreg/errors.h>
#include <mpreg/kdtree.h>

#include <algorithm>
#include <limits>
#include <numeric>

namespace mpreg {

KdTree3::KdTree3(std::span<const Vec3> points, std::size_t leaf_size)
    : points_(points.begin(), points.end()), leaf_size_(std::max<std::size_t>(leaf_size, 1))
{
    if (points_.size() >= std::numeric_limits<std::uint32_t>::max())
        throw RegistrationError(ErrorCode::InvalidArgument, "too many points for KdTree3");
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    if (!points_.empty()) build(0, static_cast<std::uint32_t>(points_.size()));
}

std::int32_t KdTree3::build(std::uint32_t begin, std::uint32_t end)
{
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end});

    if (end - begin <= leaf_size_) return id;

    Vec3 lo = points_[order_[begin]], hi = lo;
    for (std::uint32_t i = begin + 1; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    if (hi(axis) == lo(axis)) return id;  // all points identical: keep as leaf

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(
        order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
        [&](std::uint32_t a, std::uint32_t b) { return points_[a](axis) < points_[b](axis); });

    nodes_[id].axis  = axis;
    nodes_[id].split = points_[order_[mid]](axis);
    const auto left  = build(begin, mid);
    const auto right = build(mid, end);
    nodes_[id].left  = left;
    nodes_[id].right = right;
    return id;
}

void KdTree3::search(std::int32_t node_id, const Vec3& q, Neighbor& best) const
{
    const Node& n = nodes_[node_id];
    if (n.left < 0) {
        for (std::uint32_t i = n.begin; i < n.end; ++i) {
            const std::uint32_t idx = order_[i];
            const double d2 = (points_[idx] - q).squaredNorm();
            if (d2 < best.sq_dist || (d2 == best.sq_dist && idx < best.index)) best = {idx, d2};
        }
        return;
    }
    const double diff = q(n.axis) - n.split;
    const std::int32_t near_side = diff < 0.0 ? n.left : n.right;
    const std::int32_t far_side  = diff < 0.0 ? n.right : n.left;
    search(near_side, q, best);
    if (diff * diff <= best.sq_dist) search(far_side, q, best);
}

std::optional<KdTree3::Neighbor> KdTree3::nearest(const Vec3& query) const
{
    if (points_.empty()) return std::nullopt;
    Neighbor best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
    search(0, query, best);
    return best;
}

}  // namespace mpreg
