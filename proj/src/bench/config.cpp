/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include <mpreg/bench/config.h>
#include <mpreg/errors.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace mpreg::bench {

std::string to_string(Experiment e)
{
    switch (e) {
        case Experiment::Noise: return "noise";
        case Experiment::Outliers: return "outliers";
        case Experiment::Robust: return "robust";
        case Experiment::Icp: return "icp";
    }
    return "?";
}

Experiment experiment_from_string(const std::string& s)
{
    if (s == "noise") return Experiment::Noise;
    if (s == "outliers") return Experiment::Outliers;
    if (s == "robust") return Experiment::Robust;
    if (s == "icp") return Experiment::Icp;
    throw RegistrationError(ErrorCode::InvalidArgument, "unknown experiment '" + s + "'");
}

std::vector<SolverKind> parse_solver_list(const std::string& s)
{
    if (s == "all") return {SolverKind::Horn, SolverKind::OLAE, SolverKind::GaussNewton};
    std::vector<SolverKind> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const auto k = solver_from_string(tok);
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

void BenchConfig::validate() const
{
    auto bad = [](const std::string& m) { throw RegistrationError(ErrorCode::InvalidArgument, m); };
    if (trials < 1) bad("trials must be >= 1");
    if (sigmas.empty()) bad("sigma list is empty");
    for (double s : sigmas)
        if (!(s >= 0.0) || !std::isfinite(s)) bad("sigma must be finite and >= 0");
    if (outlier_ratios.empty()) bad("outlier ratio list is empty");
    for (double r : outlier_ratios)
        if (!(r >= 0.0 && r < 1.0)) bad("outlier ratio must lie in [0, 1)");
    if (!(st > 0.0)) bad("st must be > 0");
    if (!(robust_delta > 0.0)) bad("robust delta must be > 0");
    if (!(cube > 0.0)) bad("cube must be > 0");
    if (solvers.empty()) bad("solver list is empty");
    if (experiment != Experiment::Icp && points + planes + lines == 0) bad("scene has no primitives");
    if (experiment == Experiment::Icp && model_points < 3) bad("model points must be >= 3");
}

BenchConfig BenchConfig::defaults_for(Experiment e)
{
    BenchConfig c;
    c.experiment = e;
    switch (e) {
        case Experiment::Noise: break;
        case Experiment::Outliers:
            c.sigmas = {0.0};
            c.outlier_ratios = {0.0, 0.05, 0.1, 0.2, 0.3};
            break;
        case Experiment::Robust:
            c.sigmas = {0.1};
            c.outlier_ratios = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
            break;
        case Experiment::Icp:
            c.sigmas = {0.0};
            c.trials = 10;
            break;
    }
    return c;
}

namespace {

template <class T>
std::vector<T> scalar_or_list(const nlohmann::json& v)
{
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
}

}  // namespace

void apply_json(BenchConfig& c, const nlohmann::json& j)
{
    if (!j.is_object()) throw RegistrationError(ErrorCode::ParseError, "config must be a JSON object");
    static const std::set<std::string> known{
        "experiment", "points", "planes", "lines", "cube", "sigma", "outlier-ratio", "normal-sigma-scale",
        "st", "robust-delta", "guess-angle-deg", "guess-shift", "trials", "seed", "solver", "threads",
        "model", "allow-fallback-model", "model-points", "out"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw RegistrationError(ErrorCode::ParseError, "unknown config key '" + k + "'");
    try {
        if (j.contains("experiment")) c.experiment = experiment_from_string(j["experiment"].get<std::string>());
        if (j.contains("points")) c.points = j["points"].get<std::size_t>();
        if (j.contains("planes")) c.planes = j["planes"].get<std::size_t>();
        if (j.contains("lines")) c.lines = j["lines"].get<std::size_t>();
        if (j.contains("cube")) c.cube = j["cube"].get<double>();
        if (j.contains("sigma")) c.sigmas = scalar_or_list<double>(j["sigma"]);
        if (j.contains("outlier-ratio")) c.outlier_ratios = scalar_or_list<double>(j["outlier-ratio"]);
        if (j.contains("normal-sigma-scale")) c.normal_sigma_scale = j["normal-sigma-scale"].get<double>();
        if (j.contains("st")) c.st = j["st"].get<double>();
        if (j.contains("robust-delta")) c.robust_delta = j["robust-delta"].get<double>();
        if (j.contains("guess-angle-deg")) c.guess_angle_deg = j["guess-angle-deg"].get<double>();
        if (j.contains("guess-shift")) c.guess_shift = j["guess-shift"].get<double>();
        if (j.contains("trials")) c.trials = j["trials"].get<std::size_t>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("solver")) c.solvers = parse_solver_list(j["solver"].get<std::string>());
        if (j.contains("threads")) c.threads = j["threads"].get<std::size_t>();
        if (j.contains("model")) c.model = j["model"].get<std::string>();
        if (j.contains("allow-fallback-model")) c.allow_fallback_model = j["allow-fallback-model"].get<bool>();
        if (j.contains("model-points")) c.model_points = j["model-points"].get<std::size_t>();
        if (j.contains("out")) c.out = j["out"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw RegistrationError(ErrorCode::ParseError, std::string("config: ") + e.what());
    }
}

nlohmann::json to_json(const BenchConfig& c)
{
    std::string solvers;
    for (auto k : c.solvers) solvers += (solvers.empty() ? "" : ",") + to_string(k);
    return {{"experiment", to_string(c.experiment)},
            {"points", c.points},
            {"planes", c.planes},
            {"lines", c.lines},
            {"cube", c.cube},
            {"sigma", c.sigmas},
            {"outlier-ratio", c.outlier_ratios},
            {"normal-sigma-scale", c.normal_sigma_scale},
            {"st", c.st},
            {"robust-delta", c.robust_delta},
            {"guess-angle-deg", c.guess_angle_deg},
            {"guess-shift", c.guess_shift},
            {"trials", c.trials},
            {"seed", c.seed},
            {"solver", solvers},
            {"threads", c.threads},
            {"model", c.model},
            {"allow-fallback-model", c.allow_fallback_model},
            {"model-points", c.model_points},
            {"out", c.out.string()}};
}

BenchConfig load_config(const std::filesystem::path& path, Experiment default_experiment)
{
    std::ifstream f(path);
    if (!f) throw RegistrationError(ErrorCode::InvalidArgument, "cannot open config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw RegistrationError(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    Experiment e = default_experiment;
    if (j.is_object() && j.contains("experiment") && j["experiment"].is_string())
        e = experiment_from_string(j["experiment"].get<std::string>());
    BenchConfig c = BenchConfig::defaults_for(e);
    apply_json(c, j);
    return c;
}

}  // namespace mpreg::bench
