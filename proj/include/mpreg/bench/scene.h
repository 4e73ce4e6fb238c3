/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   scene.h
 * @brief  Synthetic scenes for the solver benchmarks and a built-in model
 *         for ICP runs without an external PLY file.
 *
 * Set A is drawn uniformly in the cube [0, cube]^3, set B is A moved by a
 * random rigid transform T and corrupted with noise. The returned ground
 * truth is T^-1, the pose mapping B onto A.
 */
#pragma once

#include <mpreg/icp.h>
#include <mpreg/primitives.h>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace mpreg::bench {

using Rng = std::mt19937_64;

struct SceneConfig {
    std::size_t points = 100;
    std::size_t planes = 0;
    std::size_t lines  = 0;
    double cube  = 50.0;
    double sigma = 0.0;  ///< point noise std-dev (scene units)
    /// Std-dev of the normal/director perturbation angle, in radians per
    /// unit of sigma. The default reads sigma as degrees.
    double normal_sigma_scale = std::numbers::pi / 180.0;
    double outlier_ratio = 0.0;  ///< fraction of point pairs re-drawn in the cube
};

struct Scene {
    PairingSet pairings;
    Pose ground_truth;
    std::vector<std::size_t> outlier_indices;  ///< sorted
};

/// Deterministic per-trial seed from a base seed and a path of indices.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

UnitQuaternion uniform_random_rotation(Rng& rng);
Vec3 random_unit_vector(Rng& rng);

/// Rotation about a uniformly random axis by |N(0, angle_sigma)|.
UnitQuaternion random_small_rotation(Rng& rng, double angle_sigma);

Scene gen_synthetic_scene(const SceneConfig& cfg, std::uint64_t seed);

/// Bunny-sized (about 0.15 units across) irregular closed surface sampled
/// with n points; used when no PLY model is available.
MetricMap synthetic_model(std::size_t n, std::uint64_t seed);

nlohmann::json scene_to_json(const Scene& s);
Scene scene_from_json(const nlohmann::json& j);

nlohmann::json pose_to_json(const Pose& p);
Pose pose_from_json(const nlohmann::json& j);

}  // namespace mpreg::bench
