/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#pragma once

#include <mpreg/primitives.h>

namespace mpreg {

/// Geman-McClure weight delta^2 / (delta^2 + r^2), in (0, 1].
/// Throws InvalidThreshold if delta <= 0.
double robust_weight(double residual_norm, double delta);

/// Multiplies every pair weight by robust_weight() of its residual under
/// `guess`: point distance for points, direction difference for lines and
/// planes, point-to-plane distance for point-plane pairs.
void apply_robust_weights(PairingSet& pairs, const Pose& guess, double delta);

}  // namespace mpreg
