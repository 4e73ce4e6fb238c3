/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include <mpreg/errors.h>
#include <mpreg/primitives.h>

#include <cmath>
#include <string>

namespace mpreg {

PrimitiveKind kind_of(const GeoPrimitive& p)
{
    return static_cast<PrimitiveKind>(p.index());
}

Vec3 transform_primitive(const Pose& pose, const Vec3& p) { return pose.apply(p); }

Line transform_primitive(const Pose& pose, const Line& l)
{
    return {pose.apply(l.anchor), UnitVec3(pose.rotation.rotate(l.director.dir()))};
}

Plane transform_primitive(const Pose& pose, const Plane& p)
{
    return {pose.apply(p.centroid), UnitVec3(pose.rotation.rotate(p.normal.dir()))};
}

GeoPrimitive transform_primitive(const Pose& pose, const GeoPrimitive& p)
{
    return std::visit([&](const auto& v) -> GeoPrimitive { return transform_primitive(pose, v); }, p);
}

void PairingSet::validate() const
{
    auto check = [](const auto& pairs, const char* kind) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double w = pairs[i].weight;
            if (!(w > 0.0) || !std::isfinite(w))
                throw RegistrationError(
                    ErrorCode::InvalidArgument,
                    std::string(kind) + " pair " + std::to_string(i) + " has non-positive weight");
        }
    };
    check(point_pairs, "point");
    check(line_pairs, "line");
    check(plane_pairs, "plane");
    check(point_plane_pairs, "point-to-plane");
}

}  // namespace mpreg
