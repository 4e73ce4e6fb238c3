/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include <mpreg/bench/ply.h>
#include <mpreg/errors.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mpreg::bench {

namespace {

enum class Scalar { I8, U8, I16, U16, I32, U32, F32, F64 };

std::optional<Scalar> scalar_from(const std::string& s)
{
    if (s == "char" || s == "int8") return Scalar::I8;
    if (s == "uchar" || s == "uint8") return Scalar::U8;
    if (s == "short" || s == "int16") return Scalar::I16;
    if (s == "ushort" || s == "uint16") return Scalar::U16;
    if (s == "int" || s == "int32") return Scalar::I32;
    if (s == "uint" || s == "uint32") return Scalar::U32;
    if (s == "float" || s == "float32") return Scalar::F32;
    if (s == "double" || s == "float64") return Scalar::F64;
    return std::nullopt;
}

std::size_t scalar_size(Scalar s)
{
    switch (s) {
        case Scalar::I8: case Scalar::U8: return 1;
        case Scalar::I16: case Scalar::U16: return 2;
        case Scalar::I32: case Scalar::U32: case Scalar::F32: return 4;
        case Scalar::F64: return 8;
    }
    return 0;
}

struct Property {
    std::string name;
    Scalar type = Scalar::F32;
    std::optional<Scalar> list_count;  // set for list properties
};

struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<Property> props;
};

struct Header {
    PlyEncoding enc = PlyEncoding::Ascii;
    std::vector<Element> elements;
    std::size_t lines = 0;  // header lines consumed
};

[[noreturn]] void parse_fail(const std::string& src, const std::string& where, const std::string& msg)
{
    throw RegistrationError(ErrorCode::ParseError, src + ":" + where + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& line)
{
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string t; ss >> t;) out.push_back(std::move(t));
    return out;
}

Header read_header(std::istream& in, const std::string& src)
{
    Header h;
    std::string line;
    auto next = [&]() {
        if (!std::getline(in, line)) parse_fail(src, "line " + std::to_string(h.lines + 1), "unexpected end of header");
        ++h.lines;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };
    auto where = [&]() { return "line " + std::to_string(h.lines); };

    next();
    if (line != "ply") parse_fail(src, where(), "missing 'ply' magic");
    bool have_format = false;
    for (;;) {
        next();
        const auto tok = split_ws(line);
        if (tok.empty()) continue;
        if (tok[0] == "end_header") break;
        if (tok[0] == "comment" || tok[0] == "obj_info") continue;
        if (tok[0] == "format") {
            if (tok.size() != 3) parse_fail(src, where(), "malformed format line");
            if (tok[1] == "ascii") h.enc = PlyEncoding::Ascii;
            else if (tok[1] == "binary_little_endian") h.enc = PlyEncoding::BinaryLittleEndian;
            else throw RegistrationError(ErrorCode::UnsupportedFormat, src + ": encoding '" + tok[1] + "'");
            if (tok[2] != "1.0") throw RegistrationError(ErrorCode::UnsupportedFormat, src + ": version " + tok[2]);
            have_format = true;
        } else if (tok[0] == "element") {
            if (tok.size() != 3) parse_fail(src, where(), "malformed element line");
            Element e;
            e.name = tok[1];
            try {
                std::size_t used = 0;
                e.count = std::stoull(tok[2], &used);
                if (used != tok[2].size()) throw std::invalid_argument(tok[2]);
            } catch (const std::exception&) {
                parse_fail(src, where(), "bad element count '" + tok[2] + "'");
            }
            h.elements.push_back(std::move(e));
        } else if (tok[0] == "property") {
            if (h.elements.empty()) parse_fail(src, where(), "property before any element");
            Property p;
            if (tok.size() == 5 && tok[1] == "list") {
                const auto c = scalar_from(tok[2]);
                const auto t = scalar_from(tok[3]);
                if (!c || !t) parse_fail(src, where(), "unknown list type");
                p.list_count = *c;
                p.type = *t;
                p.name = tok[4];
            } else if (tok.size() == 3) {
                const auto t = scalar_from(tok[1]);
                if (!t) parse_fail(src, where(), "unknown property type '" + tok[1] + "'");
                p.type = *t;
                p.name = tok[2];
            } else {
                parse_fail(src, where(), "malformed property line");
            }
            h.elements.back().props.push_back(std::move(p));
        } else {
            parse_fail(src, where(), "unknown header keyword '" + tok[0] + "'");
        }
    }
    if (!have_format) parse_fail(src, where(), "missing format line");
    return h;
}

struct XyzSlots {
    int x = -1, y = -1, z = -1;
};

XyzSlots find_xyz(const Element& e, const std::string& src)
{
    XyzSlots s;
    for (std::size_t i = 0; i < e.props.size(); ++i) {
        const auto& p = e.props[i];
        int* slot = p.name == "x" ? &s.x : p.name == "y" ? &s.y : p.name == "z" ? &s.z : nullptr;
        if (!slot) continue;
        if (p.list_count) parse_fail(src, "header", "vertex property '" + p.name + "' is a list");
        *slot = static_cast<int>(i);
    }
    if (s.x < 0 || s.y < 0 || s.z < 0) parse_fail(src, "header", "vertex element lacks x, y or z");
    return s;
}

double read_binary_scalar(std::istream& in, Scalar t, const std::string& src)
{
    unsigned char buf[8];
    const auto n = scalar_size(t);
    const auto offset = static_cast<long long>(in.tellg());
    if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n)))
        parse_fail(src, "byte " + std::to_string(offset), "unexpected end of binary data");
    static_assert(std::endian::native == std::endian::little, "big-endian hosts not supported");
    switch (t) {
        case Scalar::I8: { std::int8_t v; std::memcpy(&v, buf, 1); return v; }
        case Scalar::U8: { std::uint8_t v; std::memcpy(&v, buf, 1); return v; }
        case Scalar::I16: { std::int16_t v; std::memcpy(&v, buf, 2); return v; }
        case Scalar::U16: { std::uint16_t v; std::memcpy(&v, buf, 2); return v; }
        case Scalar::I32: { std::int32_t v; std::memcpy(&v, buf, 4); return v; }
        case Scalar::U32: { std::uint32_t v; std::memcpy(&v, buf, 4); return v; }
        case Scalar::F32: { float v; std::memcpy(&v, buf, 4); return v; }
        case Scalar::F64: { double v; std::memcpy(&v, buf, 8); return v; }
    }
    return 0.0;
}

void load_binary(std::istream& in, const Header& h, const std::string& src, MetricMap& out)
{
    for (const auto& e : h.elements) {
        const bool is_vertex = e.name == "vertex";
        XyzSlots s;
        if (is_vertex) {
            s = find_xyz(e, src);
            out.points.reserve(e.count);
        }
        for (std::size_t r = 0; r < e.count; ++r) {
            Vec3 v = Vec3::Zero();
            for (std::size_t i = 0; i < e.props.size(); ++i) {
                const auto& p = e.props[i];
                if (p.list_count) {
                    const double c = read_binary_scalar(in, *p.list_count, src);
                    if (c < 0) parse_fail(src, "byte " + std::to_string(static_cast<long long>(in.tellg())), "negative list count");
                    for (std::size_t k = 0; k < static_cast<std::size_t>(c); ++k) read_binary_scalar(in, p.type, src);
                    continue;
                }
                const double val = read_binary_scalar(in, p.type, src);
                const int ii = static_cast<int>(i);
                if (ii == s.x) v.x() = val;
                else if (ii == s.y) v.y() = val;
                else if (ii == s.z) v.z() = val;
            }
            if (is_vertex) out.points.push_back(v);
        }
        if (is_vertex) return;
    }
}

double parse_number(const std::string& tok, const std::string& src, std::size_t line)
{
    double v = 0.0;
    const auto* b = tok.data();
    const auto* e = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e)
        parse_fail(src, "line " + std::to_string(line), "bad number '" + tok + "'");
    return v;
}

void load_ascii(std::istream& in, const Header& h, const std::string& src, MetricMap& out)
{
    std::size_t line_no = h.lines;
    std::string line;
    for (const auto& e : h.elements) {
        const bool is_vertex = e.name == "vertex";
        XyzSlots s;
        if (is_vertex) {
            s = find_xyz(e, src);
            out.points.reserve(e.count);
        }
        for (std::size_t r = 0; r < e.count; ++r) {
            do {
                if (!std::getline(in, line))
                    parse_fail(src, "line " + std::to_string(line_no + 1),
                               "unexpected end of file in element '" + e.name + "'");
                ++line_no;
            } while (line.find_first_not_of(" \t\r") == std::string::npos);
            if (!is_vertex) continue;
            const auto tok = split_ws(line);
            Vec3 v = Vec3::Zero();
            std::size_t t = 0;
            for (std::size_t i = 0; i < e.props.size(); ++i) {
                const auto& p = e.props[i];
                if (t >= tok.size()) parse_fail(src, "line " + std::to_string(line_no), "too few values");
                if (p.list_count) {
                    const double c = parse_number(tok[t++], src, line_no);
                    t += static_cast<std::size_t>(std::max(0.0, c));
                    continue;
                }
                const double val = parse_number(tok[t++], src, line_no);
                const int ii = static_cast<int>(i);
                if (ii == s.x) v.x() = val;
                else if (ii == s.y) v.y() = val;
                else if (ii == s.z) v.z() = val;
            }
            if (t != tok.size()) parse_fail(src, "line " + std::to_string(line_no), "too many values");
            out.points.push_back(v);
        }
        if (is_vertex) return;
    }
}

}  // namespace

MetricMap load_ply(std::istream& in, const std::string& source_name)
{
    const Header h = read_header(in, source_name);
    const bool has_vertex = std::any_of(h.elements.begin(), h.elements.end(),
                                        [](const Element& e) { return e.name == "vertex"; });
    if (!has_vertex) parse_fail(source_name, "header", "no vertex element");
    MetricMap m;
    if (h.enc == PlyEncoding::Ascii) load_ascii(in, h, source_name, m);
    else load_binary(in, h, source_name, m);
    return m;
}

MetricMap load_ply(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw RegistrationError(ErrorCode::MissingModel, "cannot open " + path.string());
    return load_ply(f, path.string());
}

void write_ply(std::ostream& out, const MetricMap& map, PlyEncoding enc)
{
    out << "ply\n"
        << (enc == PlyEncoding::Ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n")
        << "element vertex " << map.points.size() << "\n"
        << "property double x\nproperty double y\nproperty double z\nend_header\n";
    if (enc == PlyEncoding::Ascii) {
        char buf[32];
        for (const auto& p : map.points) {
            for (int k = 0; k < 3; ++k) {
                const auto r = std::to_chars(buf, buf + sizeof buf, p[k]);  // shortest round-trip form
                out.write(buf, r.ptr - buf);
                out.put(k == 2 ? '\n' : ' ');
            }
        }
    } else {
        for (const auto& p : map.points) {
            const double xyz[3] = {p.x(), p.y(), p.z()};
            out.write(reinterpret_cast<const char*>(xyz), sizeof xyz);
        }
    }
}

void write_ply(const std::filesystem::path& path, const MetricMap& map, PlyEncoding enc)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw RegistrationError(ErrorCode::InvalidArgument, "cannot write " + path.string());
    write_ply(f, map, enc);
    if (!f) throw RegistrationError(ErrorCode::InvalidArgument, "write failed: " + path.string());
}

MetricMap downsample(const MetricMap& map, std::size_t n, std::uint64_t seed)
{
    const std::size_t N = map.points.size();
    std::vector<std::size_t> idx(N);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);

    MetricMap out;
    out.lines = map.lines;
    out.planes = map.planes;
    if (n >= N) {
        for (std::size_t i : idx) out.points.push_back(map.points[i]);
        return out;
    }
    out.points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.points.push_back(map.points[idx[k * N / n]]);
    return out;
}

}  // namespace mpreg::bench
