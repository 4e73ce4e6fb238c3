/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include <mpreg/bench/scene.h>
#include <mpreg/errors.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpreg::bench {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Vec3 uniform_in_cube(Rng& rng, double cube)
{
    std::uniform_real_distribution<double> u(0.0, cube);
    const double x = u(rng), y = u(rng), z = u(rng);
    return {x, y, z};
}

Vec3 gaussian3(Rng& rng, double sigma)
{
    if (sigma == 0.0) return Vec3::Zero();
    std::normal_distribution<double> n(0.0, sigma);
    const double x = n(rng), y = n(rng), z = n(rng);
    return {x, y, z};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t s = splitmix64(base);
    for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return s;
}

Vec3 random_unit_vector(Rng& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;) {
        const double x = n(rng), y = n(rng), z = n(rng);
        const Vec3 v(x, y, z);
        const double len = v.norm();
        if (len > 1e-9) return v / len;
    }
}

UnitQuaternion uniform_random_rotation(Rng& rng)
{
    // Normalized 4D Gaussian: uniform on S^3, hence uniform on SO(3).
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;) {
        const double w = n(rng), x = n(rng), y = n(rng), z = n(rng);
        if (w * w + x * x + y * y + z * z > 1e-12) return {w, x, y, z};
    }
}

UnitQuaternion random_small_rotation(Rng& rng, double angle_sigma)
{
    const Vec3 axis = random_unit_vector(rng);
    if (angle_sigma == 0.0) return UnitQuaternion::identity();
    std::normal_distribution<double> n(0.0, angle_sigma);
    return UnitQuaternion::from_axis_angle(axis, std::abs(n(rng)));
}

Scene gen_synthetic_scene(const SceneConfig& cfg, std::uint64_t seed)
{
    if (cfg.sigma < 0.0 || cfg.outlier_ratio < 0.0 || cfg.outlier_ratio >= 1.0 || cfg.cube <= 0.0)
        throw RegistrationError(ErrorCode::InvalidArgument, "invalid scene configuration");

    Rng rng(seed);
    const Pose T(uniform_random_rotation(rng), uniform_in_cube(rng, cfg.cube));
    const double ang_sigma = cfg.sigma * cfg.normal_sigma_scale;

    Scene s;
    s.ground_truth = T.inverse();

    auto& pp = s.pairings;
    pp.point_pairs.reserve(cfg.points);
    for (std::size_t i = 0; i < cfg.points; ++i) {
        const Vec3 a = uniform_in_cube(rng, cfg.cube);
        pp.point_pairs.push_back({a, T.apply(a) + gaussian3(rng, cfg.sigma), 1.0});
    }
    for (std::size_t i = 0; i < cfg.planes; ++i) {
        const Vec3 c = uniform_in_cube(rng, cfg.cube);
        const UnitVec3 n(random_unit_vector(rng));
        Plane b = transform_primitive(T, Plane{c, n});
        b.centroid += gaussian3(rng, cfg.sigma);
        b.normal = UnitVec3(random_small_rotation(rng, ang_sigma).rotate(b.normal.dir()));
        pp.plane_pairs.push_back({Plane{c, n}, b, 1.0});
    }
    for (std::size_t i = 0; i < cfg.lines; ++i) {
        const Vec3 c = uniform_in_cube(rng, cfg.cube);
        const UnitVec3 d(random_unit_vector(rng));
        Line b = transform_primitive(T, Line{c, d});
        b.anchor += gaussian3(rng, cfg.sigma);
        b.director = UnitVec3(random_small_rotation(rng, ang_sigma).rotate(b.director.dir()));
        pp.line_pairs.push_back({Line{c, d}, b, 1.0});
    }

    const auto n_out = static_cast<std::size_t>(std::floor(cfg.outlier_ratio * static_cast<double>(cfg.points)));
    if (n_out > 0) {
        std::vector<std::size_t> idx(cfg.points);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(n_out);
        std::sort(idx.begin(), idx.end());
        for (std::size_t i : idx) pp.point_pairs[i].b = uniform_in_cube(rng, cfg.cube);
        s.outlier_indices = std::move(idx);
    }
    return s;
}

MetricMap synthetic_model(std::size_t n, std::uint64_t seed)
{
    // Union of a few ellipsoids (body, head, two ears, tail) sampled on
    // their surfaces, then keeping only points not buried inside another
    // lobe. Lobes are placed asymmetrically so the shape has no rotational
    // symmetry.
    struct Lobe {
        Vec3 center;
        Vec3 radii;
        double weight;
    };
    const std::array<Lobe, 5> lobes{{
        {Vec3(0.0, 0.0, 0.0), Vec3(0.070, 0.050, 0.045), 0.45},
        {Vec3(0.055, 0.010, 0.045), Vec3(0.032, 0.028, 0.030), 0.20},
        {Vec3(0.060, 0.025, 0.095), Vec3(0.010, 0.008, 0.032), 0.12},
        {Vec3(0.045, -0.010, 0.090), Vec3(0.009, 0.009, 0.028), 0.12},
        {Vec3(-0.075, -0.005, 0.010), Vec3(0.015, 0.015, 0.013), 0.11},
    }};
    auto inside = [&](const Vec3& p, std::size_t skip) {
        for (std::size_t k = 0; k < lobes.size(); ++k) {
            if (k == skip) continue;
            if (((p - lobes[k].center).cwiseQuotient(lobes[k].radii)).squaredNorm() < 1.0) return true;
        }
        return false;
    };

    Rng rng(seed);
    std::discrete_distribution<std::size_t> pick({lobes[0].weight, lobes[1].weight, lobes[2].weight,
                                                  lobes[3].weight, lobes[4].weight});
    MetricMap m;
    m.points.reserve(n);
    while (m.points.size() < n) {
        const std::size_t k = pick(rng);
        const Vec3 p = lobes[k].center + random_unit_vector(rng).cwiseProduct(lobes[k].radii);
        if (!inside(p, k)) m.points.push_back(p);
    }
    return m;
}

nlohmann::json pose_to_json(const Pose& p)
{
    const auto& q = p.rotation;
    return {{"rotation", {q.qr(), q.qx(), q.qy(), q.qz()}},
            {"translation", {p.translation.x(), p.translation.y(), p.translation.z()}}};
}

Pose pose_from_json(const nlohmann::json& j)
{
    const auto q = j.at("rotation").get<std::array<double, 4>>();
    const auto t = j.at("translation").get<std::array<double, 3>>();
    return {UnitQuaternion(q[0], q[1], q[2], q[3]), Vec3(t[0], t[1], t[2])};
}

namespace {

nlohmann::json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
Vec3 json_vec(const nlohmann::json& j)
{
    const auto a = j.get<std::array<double, 3>>();
    return {a[0], a[1], a[2]};
}

}  // namespace

nlohmann::json scene_to_json(const Scene& s)
{
    nlohmann::json j;
    j["ground_truth"] = pose_to_json(s.ground_truth);
    j["outlier_indices"] = s.outlier_indices;
    auto& pts = j["point_pairs"] = nlohmann::json::array();
    for (const auto& p : s.pairings.point_pairs)
        pts.push_back({{"a", vec_json(p.a)}, {"b", vec_json(p.b)}, {"weight", p.weight}});
    auto& pls = j["plane_pairs"] = nlohmann::json::array();
    for (const auto& p : s.pairings.plane_pairs)
        pls.push_back({{"a", {{"centroid", vec_json(p.a.centroid)}, {"normal", vec_json(p.a.normal)}}},
                       {"b", {{"centroid", vec_json(p.b.centroid)}, {"normal", vec_json(p.b.normal)}}},
                       {"weight", p.weight}});
    auto& lns = j["line_pairs"] = nlohmann::json::array();
    for (const auto& p : s.pairings.line_pairs)
        lns.push_back({{"a", {{"anchor", vec_json(p.a.anchor)}, {"director", vec_json(p.a.director)}}},
                       {"b", {{"anchor", vec_json(p.b.anchor)}, {"director", vec_json(p.b.director)}}},
                       {"weight", p.weight}});
    return j;
}

Scene scene_from_json(const nlohmann::json& j)
{
    Scene s;
    try {
        if (j.contains("ground_truth")) s.ground_truth = pose_from_json(j["ground_truth"]);
        if (j.contains("outlier_indices"))
            s.outlier_indices = j["outlier_indices"].get<std::vector<std::size_t>>();
        for (const auto& p : j.value("point_pairs", nlohmann::json::array()))
            s.pairings.point_pairs.push_back({json_vec(p.at("a")), json_vec(p.at("b")), p.value("weight", 1.0)});
        for (const auto& p : j.value("plane_pairs", nlohmann::json::array()))
            s.pairings.plane_pairs.push_back(
                {Plane{json_vec(p.at("a").at("centroid")), UnitVec3(json_vec(p.at("a").at("normal")))},
                 Plane{json_vec(p.at("b").at("centroid")), UnitVec3(json_vec(p.at("b").at("normal")))},
                 p.value("weight", 1.0)});
        for (const auto& p : j.value("line_pairs", nlohmann::json::array()))
            s.pairings.line_pairs.push_back(
                {Line{json_vec(p.at("a").at("anchor")), UnitVec3(json_vec(p.at("a").at("director")))},
                 Line{json_vec(p.at("b").at("anchor")), UnitVec3(json_vec(p.at("b").at("director")))},
                 p.value("weight", 1.0)});
    } catch (const nlohmann::json::exception& e) {
        throw RegistrationError(ErrorCode::ParseError, std::string("scene json: ") + e.what());
    }
    return s;
}

}  // namespace mpreg::bench
