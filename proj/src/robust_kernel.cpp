/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include <mpreg/errors.h>
#include <mpreg/robust_kernel.h>

#include <cmath>

namespace mpreg {

double robust_weight(double residual_norm, double delta)
{
    if (!(delta > 0.0))
        throw RegistrationError(ErrorCode::InvalidThreshold, "robust delta must be positive");
    const double d2 = delta * delta;
    return d2 / (d2 + residual_norm * residual_norm);
}

void apply_robust_weights(PairingSet& pairs, const Pose& guess, double delta)
{
    if (!(delta > 0.0))
        throw RegistrationError(ErrorCode::InvalidThreshold, "robust delta must be positive");
    const Mat3 R = guess.rotation_matrix();
    for (auto& p : pairs.point_pairs)
        p.weight *= robust_weight((p.a - guess.apply(p.b)).norm(), delta);
    for (auto& p : pairs.line_pairs)
        p.weight *= robust_weight((p.a.director.dir() - R * p.b.director.dir()).norm(), delta);
    for (auto& p : pairs.plane_pairs)
        p.weight *= robust_weight((p.a.normal.dir() - R * p.b.normal.dir()).norm(), delta);
    for (auto& p : pairs.point_plane_pairs)
        p.weight *= robust_weight(std::abs(p.a.normal.dir().dot(guess.apply(p.b) - p.a.centroid)), delta);
}

}  // namespace mpreg
