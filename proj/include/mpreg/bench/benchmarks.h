/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   benchmarks.h
 * @brief  Monte Carlo studies over synthetic scenes and ICP trials.
 *
 * Each run covers the grid sigmas x outlier_ratios x trials. Trials run on
 * a worker pool, each with its own generator seeded from (seed, ratio
 * index, trial); the scene for a trial is shared by all methods and all
 * sigma values, so method comparisons are paired. Output order is fixed:
 * sigma, ratio, trial, method. Results do not depend on the thread count.
 */
#pragma once

#include <mpreg/bench/config.h>
#include <mpreg/bench/csv.h>
#include <mpreg/icp.h>

#include <functional>
#include <string>
#include <vector>

namespace mpreg::bench {

/// CPU time consumed by the calling thread, in seconds.
double thread_cpu_seconds();

/// Every solver in cfg.solvers on clean pairings (GN starts at ground truth).
std::vector<BenchRecord> run_noise_benchmark(const BenchConfig& cfg);

/// Horn/OLAE with scale-based rejection ("horn+st", "olae+st") against
/// unfiltered GN and Horn ("gn", "horn").
std::vector<BenchRecord> run_outlier_benchmark(const BenchConfig& cfg);

/// Each solver plain and with Geman-McClure weights ("<solver>+robust")
/// computed from ground truth perturbed by guess_angle_deg / guess_shift.
std::vector<BenchRecord> run_robust_benchmark(const BenchConfig& cfg);

struct IcpModel {
    MetricMap map;
    bool synthetic = false;
    std::string note;
};

/// Loads cfg.model downsampled to cfg.model_points. A missing or unset
/// path falls back to the built-in shape unless fallback is disabled, in
/// which case MissingModel is thrown.
IcpModel load_icp_model(const BenchConfig& cfg);

/// ICP parameters used by the harness for a model of bounding-box size b
/// and median nearest-neighbour spacing.
IcpParams harness_icp_params(const MetricMap& model, SolverKind solver);

/// Self-registration: the model against a copy moved by a random pose
/// (translation in [-0.25b, 0.25b] per axis, yaw/pitch/roll in +-20 deg).
std::vector<BenchRecord> run_icp_benchmark(const BenchConfig& cfg);

/// Dispatches on cfg.experiment.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg);

/// Largest side of the axis-aligned bounding box.
double bbox_size(const std::vector<Vec3>& pts);

/// Median distance from each point to its nearest other point.
double median_nn_spacing(const std::vector<Vec3>& pts);

/// Pose with translation uniform in [-t_max, t_max]^3 and yaw, pitch, roll
/// uniform in [-angle_max, angle_max].
Pose random_icp_offset(std::uint64_t seed, double t_max, double angle_max);

}  // namespace mpreg::bench
