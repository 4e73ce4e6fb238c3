/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   mpreg_cli.cpp
 * @brief  Command-line front end: benchmarks, one-shot solves, scene export.
 */
#include <mpreg/bench/benchmarks.h>
#include <mpreg/bench/ply.h>
#include <mpreg/bench/scene.h>
#include <mpreg/errors.h>
#include <mpreg/robust_kernel.h>
#include <mpreg/solver_gn.h>
#include <mpreg/solver_horn.h>
#include <mpreg/solver_olae.h>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace mpreg;
using namespace mpreg::bench;

namespace {

/// Flags shared by the bench-* subcommands. Each is applied on top of the
/// config file only when given on the command line.
struct BenchFlags {
    std::string config;
    std::uint64_t seed = 0;
    std::size_t trials = 0, points = 0, planes = 0, lines = 0, threads = 0, model_points = 0;
    std::string solver;
    std::vector<double> sigma, outlier_ratio;
    double st = 0, robust_delta = 0;
    std::string out, model;
    bool no_fallback = false;

    std::map<std::string, CLI::Option*> opt;

    void add_to(CLI::App* app, bool icp)
    {
        opt["config"] = app->add_option("--config", config, "JSON config file (keys mirror the flags)")
                            ->check(CLI::ExistingFile);
        opt["seed"] = app->add_option("--seed", seed, "base RNG seed");
        opt["trials"] = app->add_option("--trials", trials, "trials per sweep point")->check(CLI::PositiveNumber);
        opt["solver"] = app->add_option("--solver", solver, "horn, olae, gn, all or a comma list");
        opt["sigma"] = app->add_option("--sigma", sigma, "noise sigma list")->delimiter(',');
        opt["outlier-ratio"] =
            app->add_option("--outlier-ratio", outlier_ratio, "outlier ratio list, each in [0,1)")->delimiter(',');
        opt["threads"] = app->add_option("--threads", threads, "worker threads (0: all cores)");
        opt["out"] = app->add_option("--out", out, "CSV output path (default stdout)");
        if (icp) {
            opt["model"] = app->add_option("--model", model, "PLY model (built-in shape when absent)");
            opt["model-points"] = app->add_option("--model-points", model_points, "downsample target");
            opt["no-fallback"] = app->add_flag("--no-fallback", no_fallback, "fail when the model is missing");
        } else {
            opt["points"] = app->add_option("--points", points, "point pairs per scene");
            opt["planes"] = app->add_option("--planes", planes, "plane pairs per scene");
            opt["lines"] = app->add_option("--lines", lines, "line pairs per scene");
            opt["st"] = app->add_option("--st", st, "scale outlier threshold");
            opt["robust-delta"] = app->add_option("--robust-delta", robust_delta, "Geman-McClure delta");
        }
    }

    bool given(const std::string& k) const
    {
        const auto it = opt.find(k);
        return it != opt.end() && it->second->count() > 0;
    }

    BenchConfig resolve(Experiment e) const
    {
        BenchConfig c = given("config") ? load_config(config, e) : BenchConfig::defaults_for(e);
        c.experiment = e;
        if (given("seed")) c.seed = seed;
        if (given("trials")) c.trials = trials;
        if (given("solver")) c.solvers = parse_solver_list(solver);
        if (given("sigma")) c.sigmas = sigma;
        if (given("outlier-ratio")) c.outlier_ratios = outlier_ratio;
        if (given("threads")) c.threads = threads;
        if (given("out")) c.out = out;
        if (given("model")) c.model = model;
        if (given("model-points")) c.model_points = model_points;
        if (given("no-fallback")) c.allow_fallback_model = !no_fallback;
        if (given("points")) c.points = points;
        if (given("planes")) c.planes = planes;
        if (given("lines")) c.lines = lines;
        if (given("st")) c.st = st;
        if (given("robust-delta")) c.robust_delta = robust_delta;
        c.validate();
        return c;
    }
};

int run_bench(const BenchFlags& f, Experiment e)
{
    const BenchConfig cfg = f.resolve(e);
    const auto rows = run_benchmark(cfg);
    if (cfg.out.empty()) write_csv(std::cout, rows);
    else write_csv(cfg.out, rows);

    std::size_t failed = 0;
    for (const auto& r : rows)
        if (r.status.rfind("failed", 0) == 0) ++failed;
    std::cerr << to_string(e) << ": " << rows.size() << " rows, " << failed << " failed\n";
    return 0;
}

void emit_json(const nlohmann::json& j, const std::string& out)
{
    if (out.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(out);
    if (!f) throw RegistrationError(ErrorCode::InvalidArgument, "cannot write " + out);
    f << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mpreg: rigid registration of points, lines and planes"};
    app.require_subcommand(1);

    BenchFlags noise, outliers, robust, icp;
    noise.add_to(app.add_subcommand("bench-noise", "error vs noise sigma per solver"), false);
    outliers.add_to(app.add_subcommand("bench-outliers", "scale-based outlier rejection study"), false);
    robust.add_to(app.add_subcommand("bench-robust", "robust-weighted vs plain solving"), false);
    icp.add_to(app.add_subcommand("bench-icp", "full ICP self-registration trials"), true);

    // solve
    auto* solve = app.add_subcommand("solve", "align two PLY clouds (ICP) or solve a scene JSON");
    std::string sa, sb, scene_path, solve_solver = "horn", solve_out;
    std::optional<double> solve_st, solve_delta;
    solve->add_option("--a", sa, "reference PLY")->check(CLI::ExistingFile);
    solve->add_option("--b", sb, "PLY to align onto --a")->check(CLI::ExistingFile);
    solve->add_option("--scene", scene_path, "scene JSON with pairings (as written by gen)")
        ->check(CLI::ExistingFile);
    solve->add_option("--solver", solve_solver, "horn, olae or gn");
    solve->add_option("--st", solve_st, "scale outlier threshold (scene mode)");
    solve->add_option("--robust-delta", solve_delta, "Geman-McClure delta");
    solve->add_option("--out", solve_out, "JSON output path (default stdout)");

    // gen
    auto* gen = app.add_subcommand("gen", "write a synthetic scene (scene.json, a.ply, b.ply)");
    SceneConfig gc;
    std::uint64_t gen_seed = 1;
    std::string gen_dir = ".";
    gen->add_option("--points", gc.points);
    gen->add_option("--planes", gc.planes);
    gen->add_option("--lines", gc.lines);
    gen->add_option("--sigma", gc.sigma)->check(CLI::NonNegativeNumber);
    gen->add_option("--outlier-ratio", gc.outlier_ratio)->check(CLI::Range(0.0, 0.999999));
    gen->add_option("--seed", gen_seed);
    gen->add_option("--out", gen_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("bench-noise")) return run_bench(noise, Experiment::Noise);
        if (app.got_subcommand("bench-outliers")) return run_bench(outliers, Experiment::Outliers);
        if (app.got_subcommand("bench-robust")) return run_bench(robust, Experiment::Robust);
        if (app.got_subcommand("bench-icp")) return run_bench(icp, Experiment::Icp);

        if (app.got_subcommand("solve")) {
            const SolverKind kind = solver_from_string(solve_solver);
            nlohmann::json j;
            if (!scene_path.empty()) {
                std::ifstream f(scene_path);
                Scene s = scene_from_json(nlohmann::json::parse(f));
                if (solve_delta) apply_robust_weights(s.pairings, Pose::identity(), *solve_delta);
                SolverResult r;
                if (kind == SolverKind::Horn) r = solve_horn(s.pairings, solve_st);
                else if (kind == SolverKind::OLAE) r = solve_olae(s.pairings, solve_st);
                else r = solve_gn(s.pairings, Pose::identity());
                j["pose"] = pose_to_json(r.pose);
                j["outlier_point_indices"] = r.outlier_point_indices;
                j["iterations"] = r.diagnostics.iterations;
                j["converged"] = r.diagnostics.converged;
            } else if (!sa.empty() && !sb.empty()) {
                MetricMap a = load_ply(std::filesystem::path(sa));
                const MetricMap b = load_ply(std::filesystem::path(sb));
                a.build_index();
                IcpParams p = harness_icp_params(a, kind);
                p.scale_outlier_threshold = solve_st;
                const IcpResult r = icp_align(a, b, Pose::identity(), p);
                j["pose"] = pose_to_json(r.pose);
                j["iterations"] = r.iterations;
                j["converged"] = r.converged;
                j["final_rms"] = r.final_rms;
                j["matched_fraction"] = r.matched_fraction;
            } else {
                std::cerr << "solve: give either --scene or both --a and --b\n";
                return 2;
            }
            emit_json(j, solve_out);
            return 0;
        }

        if (app.got_subcommand("gen")) {
            const Scene s = gen_synthetic_scene(gc, gen_seed);
            const std::filesystem::path dir(gen_dir);
            std::filesystem::create_directories(dir);
            emit_json(scene_to_json(s), (dir / "scene.json").string());
            MetricMap a, b;
            for (const auto& p : s.pairings.point_pairs) {
                a.points.push_back(p.a);
                b.points.push_back(p.b);
            }
            write_ply(dir / "a.ply", a);
            write_ply(dir / "b.ply", b);
            std::cerr << "wrote " << (dir / "scene.json").string() << ", a.ply, b.ply\n";
            return 0;
        }
    } catch (const RegistrationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
