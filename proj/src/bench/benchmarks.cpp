/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include <mpreg/bench/benchmarks.h>
#include <mpreg/bench/ply.h>
#include <mpreg/bench/scene.h>
#include <mpreg/errors.h>
#include <mpreg/robust_kernel.h>
#include <mpreg/solver_gn.h>
#include <mpreg/solver_horn.h>
#include <mpreg/solver_olae.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <limits>
#include <numbers>
#include <thread>

namespace mpreg::bench {

double thread_cpu_seconds()
{
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Job {
    std::size_t sigma_idx, ratio_idx, trial;
};

/// Runs fn over every job on a pool and concatenates the outputs in job order.
std::vector<BenchRecord> run_pool(const BenchConfig& cfg, const std::vector<Job>& jobs,
                                  const std::function<std::vector<BenchRecord>(const Job&)>& fn)
{
    std::vector<std::vector<BenchRecord>> slots(jobs.size());
    std::size_t n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, jobs.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size() || failed.load()) return;
            try {
                slots[i] = fn(jobs[i]);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (first_error) std::rethrow_exception(first_error);

    // Single collector: rows come out in job order regardless of scheduling.
    std::vector<BenchRecord> out;
    for (auto& s : slots)
        for (auto& r : s) out.push_back(std::move(r));
    return out;
}

std::vector<Job> make_jobs(const BenchConfig& cfg)
{
    std::vector<Job> jobs;
    jobs.reserve(cfg.sigmas.size() * cfg.outlier_ratios.size() * cfg.trials);
    for (std::size_t s = 0; s < cfg.sigmas.size(); ++s)
        for (std::size_t r = 0; r < cfg.outlier_ratios.size(); ++r)
            for (std::size_t t = 0; t < cfg.trials; ++t) jobs.push_back({s, r, t});
    return jobs;
}

std::uint64_t scene_seed(const BenchConfig& cfg, const Job& j)
{
    return derive_seed(cfg.seed, {static_cast<std::uint64_t>(cfg.experiment), j.ratio_idx, j.trial});
}

Scene make_scene(const BenchConfig& cfg, const Job& j)
{
    SceneConfig sc;
    sc.points = cfg.points;
    sc.planes = cfg.planes;
    sc.lines = cfg.lines;
    sc.cube = cfg.cube;
    sc.sigma = cfg.sigmas[j.sigma_idx];
    sc.normal_sigma_scale = cfg.normal_sigma_scale;
    sc.outlier_ratio = cfg.outlier_ratios[j.ratio_idx];
    return gen_synthetic_scene(sc, scene_seed(cfg, j));
}

BenchRecord base_record(const BenchConfig& cfg, const Job& j, std::string method, const Scene* scene)
{
    BenchRecord r;
    r.experiment = to_string(cfg.experiment);
    r.solver = std::move(method);
    r.sigma = cfg.sigmas[j.sigma_idx];
    r.outlier_ratio = cfg.outlier_ratios[j.ratio_idx];
    r.trial = j.trial;
    if (scene) r.outliers_injected = scene->outlier_indices.size();
    return r;
}

/// Times `solve`, fills errors and outlier counts, turns exceptions into a
/// failed row.
BenchRecord timed_solve(BenchRecord r, const Scene& scene, const std::function<SolverResult()>& solve)
{
    const double t0 = thread_cpu_seconds();
    try {
        const SolverResult res = solve();
        r.cpu_time = thread_cpu_seconds() - t0;
        r.rotation_error = rotation_error(res.pose.rotation_matrix(), scene.ground_truth.rotation_matrix());
        r.translation_error = translation_error(res.pose.translation, scene.ground_truth.translation);
        for (std::size_t i : res.outlier_point_indices) {
            if (std::binary_search(scene.outlier_indices.begin(), scene.outlier_indices.end(), i))
                ++r.outliers_detected;
            else
                ++r.inliers_rejected;
        }
        if (!res.diagnostics.converged) r.status = "not_converged";
    } catch (const RegistrationError& e) {
        r.cpu_time = thread_cpu_seconds() - t0;
        r.status = "failed:" + std::string(to_string(e.code()));
        r.note = e.detail();
    }
    return r;
}

SolverResult solve_closed_form(SolverKind k, const PairingSet& p, std::optional<double> st)
{
    return k == SolverKind::Horn ? solve_horn(p, st) : solve_olae(p, st);
}

bool wants(const BenchConfig& cfg, SolverKind k)
{
    return std::find(cfg.solvers.begin(), cfg.solvers.end(), k) != cfg.solvers.end();
}

}  // namespace

std::vector<BenchRecord> run_noise_benchmark(const BenchConfig& cfg_in)
{
    BenchConfig cfg = cfg_in;
    cfg.experiment = Experiment::Noise;
    cfg.validate();
    return run_pool(cfg, make_jobs(cfg), [&](const Job& j) {
        const Scene s = make_scene(cfg, j);
        std::vector<BenchRecord> rows;
        for (SolverKind k : cfg.solvers) {
            rows.push_back(timed_solve(base_record(cfg, j, to_string(k), &s), s, [&]() {
                if (k == SolverKind::GaussNewton) return solve_gn(s.pairings, s.ground_truth);
                return solve_closed_form(k, s.pairings, std::nullopt);
            }));
        }
        return rows;
    });
}

std::vector<BenchRecord> run_outlier_benchmark(const BenchConfig& cfg_in)
{
    BenchConfig cfg = cfg_in;
    cfg.experiment = Experiment::Outliers;
    cfg.validate();
    return run_pool(cfg, make_jobs(cfg), [&](const Job& j) {
        const Scene s = make_scene(cfg, j);
        std::vector<BenchRecord> rows;
        for (SolverKind k : {SolverKind::Horn, SolverKind::OLAE}) {
            if (!wants(cfg, k)) continue;
            rows.push_back(timed_solve(base_record(cfg, j, to_string(k) + "+st", &s), s,
                                       [&]() { return solve_closed_form(k, s.pairings, cfg.st); }));
        }
        if (wants(cfg, SolverKind::GaussNewton))
            rows.push_back(timed_solve(base_record(cfg, j, "gn", &s), s,
                                       [&]() { return solve_gn(s.pairings, s.ground_truth); }));
        if (wants(cfg, SolverKind::Horn))
            rows.push_back(timed_solve(base_record(cfg, j, "horn", &s), s,
                                       [&]() { return solve_horn(s.pairings, std::nullopt); }));
        return rows;
    });
}

std::vector<BenchRecord> run_robust_benchmark(const BenchConfig& cfg_in)
{
    BenchConfig cfg = cfg_in;
    cfg.experiment = Experiment::Robust;
    cfg.validate();
    return run_pool(cfg, make_jobs(cfg), [&](const Job& j) {
        const Scene s = make_scene(cfg, j);

        Rng rng(derive_seed(scene_seed(cfg, j), {1}));
        const Pose perturb(UnitQuaternion::from_axis_angle(random_unit_vector(rng), cfg.guess_angle_deg * kDeg),
                           cfg.guess_shift * random_unit_vector(rng));
        const Pose guess = perturb * s.ground_truth;

        std::vector<BenchRecord> rows;
        for (SolverKind k : cfg.solvers) {
            const std::string name = to_string(k);
            if (k == SolverKind::GaussNewton) {
                rows.push_back(timed_solve(base_record(cfg, j, name, &s), s,
                                           [&]() { return solve_gn(s.pairings, guess); }));
                GnOptions go;
                go.robust_delta = cfg.robust_delta;
                rows.push_back(timed_solve(base_record(cfg, j, name + "+robust", &s), s,
                                           [&]() { return solve_gn(s.pairings, guess, go); }));
                continue;
            }
            rows.push_back(timed_solve(base_record(cfg, j, name, &s), s,
                                       [&]() { return solve_closed_form(k, s.pairings, std::nullopt); }));
            rows.push_back(timed_solve(base_record(cfg, j, name + "+robust", &s), s, [&]() {
                PairingSet w = s.pairings;
                apply_robust_weights(w, guess, cfg.robust_delta);
                return solve_closed_form(k, w, std::nullopt);
            }));
        }
        return rows;
    });
}

double bbox_size(const std::vector<Vec3>& pts)
{
    if (pts.empty()) return 0.0;
    Vec3 lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).maxCoeff();
}

double median_nn_spacing(const std::vector<Vec3>& pts)
{
    if (pts.size() < 2) return 0.0;
    std::vector<double> d;
    d.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < pts.size(); ++k)
            if (k != i) best = std::min(best, (pts[k] - pts[i]).squaredNorm());
        d.push_back(std::sqrt(best));
    }
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
    return d[d.size() / 2];
}

Pose random_icp_offset(std::uint64_t seed, double t_max, double angle_max)
{
    Rng rng(seed);
    std::uniform_real_distribution<double> ut(-t_max, t_max), ua(-angle_max, angle_max);
    const double tx = ut(rng), ty = ut(rng), tz = ut(rng);
    const double yaw = ua(rng), pitch = ua(rng), roll = ua(rng);
    const UnitQuaternion q = UnitQuaternion::from_axis_angle(Vec3::UnitZ(), yaw) *
                             UnitQuaternion::from_axis_angle(Vec3::UnitY(), pitch) *
                             UnitQuaternion::from_axis_angle(Vec3::UnitX(), roll);
    return {q, Vec3(tx, ty, tz)};
}

IcpModel load_icp_model(const BenchConfig& cfg)
{
    IcpModel m;
    const bool have_file = !cfg.model.empty() && std::filesystem::exists(cfg.model);
    if (have_file) {
        m.map = downsample(load_ply(std::filesystem::path(cfg.model)), cfg.model_points, cfg.seed);
        m.note = "model=" + std::filesystem::path(cfg.model).filename().string();
        return m;
    }
    if (!cfg.allow_fallback_model)
        throw RegistrationError(ErrorCode::MissingModel,
                                cfg.model.empty() ? "no model path given" : "model not found: " + cfg.model);
    m.map = synthetic_model(cfg.model_points, cfg.seed);
    m.synthetic = true;
    m.note = cfg.model.empty() ? "synthetic-model" : "synthetic-model (not found: " + cfg.model + ")";
    return m;
}

IcpParams harness_icp_params(const MetricMap& model, SolverKind solver)
{
    IcpParams p;
    p.solver = solver;
    p.max_point_pair_distance = 2.0 * median_nn_spacing(model.points);
    p.initial_point_pair_distance = bbox_size(model.points);
    p.distance_decay = 0.8;
    p.max_iterations = 100;
    p.convergence_epsilon = 1e-8;
    return p;
}

std::vector<BenchRecord> run_icp_benchmark(const BenchConfig& cfg_in)
{
    BenchConfig cfg = cfg_in;
    cfg.experiment = Experiment::Icp;
    cfg.validate();

    IcpModel model = load_icp_model(cfg);
    model.map.build_index();
    const double b = bbox_size(model.map.points);
    std::vector<IcpParams> params;
    for (SolverKind k : cfg.solvers) params.push_back(harness_icp_params(model.map, k));

    return run_pool(cfg, make_jobs(cfg), [&](const Job& j) {
        const std::uint64_t seed = scene_seed(cfg, j);
        const Pose gt = random_icp_offset(seed, 0.25 * b, 20.0 * kDeg);
        const Pose inv = gt.inverse();
        const double sigma = cfg.sigmas[j.sigma_idx];

        Rng rng(derive_seed(seed, {1}));
        std::normal_distribution<double> nd(0.0, sigma > 0.0 ? sigma : 1.0);
        MetricMap moved;
        moved.points.reserve(model.map.points.size());
        for (const auto& p : model.map.points) {
            Vec3 q = inv.apply(p);
            if (sigma > 0.0) {
                const double x = nd(rng), y = nd(rng), z = nd(rng);
                q += Vec3(x, y, z);
            }
            moved.points.push_back(q);
        }

        std::vector<BenchRecord> rows;
        for (std::size_t si = 0; si < cfg.solvers.size(); ++si) {
            BenchRecord r = base_record(cfg, j, to_string(cfg.solvers[si]), nullptr);
            r.note = model.note;
            const double t0 = thread_cpu_seconds();
            try {
                const IcpResult res = icp_align(model.map, moved, Pose::identity(), params[si]);
                r.cpu_time = thread_cpu_seconds() - t0;
                r.rotation_error = rotation_error(res.pose.rotation_matrix(), gt.rotation_matrix());
                r.translation_error = translation_error(res.pose.translation, gt.translation);
                if (!res.converged) r.status = "not_converged";
            } catch (const RegistrationError& e) {
                r.cpu_time = thread_cpu_seconds() - t0;
                r.status = "failed:" + std::string(to_string(e.code()));
                r.note += (r.note.empty() ? "" : "; ") + e.detail();
            }
            rows.push_back(std::move(r));
        }
        return rows;
    });
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg)
{
    switch (cfg.experiment) {
        case Experiment::Noise: return run_noise_benchmark(cfg);
        case Experiment::Outliers: return run_outlier_benchmark(cfg);
        case Experiment::Robust: return run_robust_benchmark(cfg);
        case Experiment::Icp: return run_icp_benchmark(cfg);
    }
    return {};
}

}  // namespace mpreg::bench
