/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   kdtree.h
 * @brief  Static 3D KD-tree for exact nearest-neighbor queries.
 */
#pragma once

#include <mpreg/geometry.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mpreg {

class KdTree3 {
public:
    struct Neighbor {
        std::size_t index = 0;
        double sq_dist    = 0.0;
    };

    explicit KdTree3(std::span<const Vec3> points, std::size_t leaf_size = 8);

    /// Exact nearest neighbor; ties resolve to the lowest point index.
    [[nodiscard]] std::optional<Neighbor> nearest(const Vec3& query) const;

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] const Vec3& point(std::size_t i) const { return points_[i]; }

private:
    struct Node {
        std::uint32_t begin = 0, end = 0;  // range into order_ (leaves)
        std::int32_t left = -1, right = -1;
        int axis     = 0;
        double split = 0.0;
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end);
    void search(std::int32_t node, const Vec3& q, Neighbor& best) const;

    std::vector<Vec3> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    std::size_t leaf_size_;
};

}  // namespace mpreg
