/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   config.h
 * @brief  Benchmark configuration, loadable from JSON. Keys mirror the CLI
 *         flags (without the leading dashes).
 */
#pragma once

#include <mpreg/solver_result.h>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

namespace mpreg::bench {

enum class Experiment { Noise, Outliers, Robust, Icp };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

struct BenchConfig {
    Experiment experiment = Experiment::Noise;

    std::size_t points = 100;
    std::size_t planes = 0;
    std::size_t lines  = 0;
    double cube = 50.0;

    /// Every run sweeps the grid sigmas x outlier_ratios.
    std::vector<double> sigmas{0.0, 0.1, 0.5, 1.0, 2.5};
    std::vector<double> outlier_ratios{0.0};
    /// Plane/line direction noise, radians per unit of sigma.
    double normal_sigma_scale = std::numbers::pi / 180.0;

    double st = 0.2;            ///< scale outlier threshold
    double robust_delta = 2.0;  ///< Geman-McClure delta

    /// Perturbation of the initial guess in the robust study.
    double guess_angle_deg = 1.0;
    double guess_shift = 0.5;

    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::vector<SolverKind> solvers{SolverKind::Horn, SolverKind::OLAE, SolverKind::GaussNewton};
    std::size_t threads = 0;  ///< 0: hardware concurrency

    // ICP study
    std::string model;  ///< PLY path; empty uses the built-in shape
    bool allow_fallback_model = true;
    std::size_t model_points = 1000;

    std::filesystem::path out;  ///< CSV path; empty writes to stdout

    /// Throws InvalidArgument when an invariant is broken.
    void validate() const;

    /// Defaults appropriate for each study (sweep grid and trial count).
    static BenchConfig defaults_for(Experiment e);
};

/// Overwrites only the keys present in `j`. Unknown keys are rejected.
void apply_json(BenchConfig& cfg, const nlohmann::json& j);
nlohmann::json to_json(const BenchConfig& cfg);

BenchConfig load_config(const std::filesystem::path& path, Experiment default_experiment);

/// "horn", "olae", "gn" or "all".
std::vector<SolverKind> parse_solver_list(const std::string& s);

}  // namespace mpreg::bench
