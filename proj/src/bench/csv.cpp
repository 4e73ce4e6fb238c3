/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include <mpreg/bench/csv.h>
#include <mpreg/errors.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace mpreg::bench {

std::string csv_escape(std::string_view f)
{
    if (f.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(f);
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v)
{
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, r.ptr};
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& rows)
{
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) out << (i ? "," : "") << kCsvColumns[i];
    out << "\r\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : rows) {
        out << csv_escape(r.experiment) << ',' << csv_escape(r.solver) << ',' << format_double(r.sigma) << ','
            << format_double(r.outlier_ratio) << ',' << r.trial << ',' << opt(r.rotation_error) << ','
            << opt(r.translation_error) << ',' << format_double(r.cpu_time) << ',' << r.outliers_injected << ','
            << r.outliers_detected << ',' << r.inliers_rejected << ',' << csv_escape(r.status) << ','
            << csv_escape(r.note) << "\r\n";
    }
}

void write_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& rows)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw RegistrationError(ErrorCode::InvalidArgument, "cannot write " + path.string());
    write_csv(f, rows);
    if (!f) throw RegistrationError(ErrorCode::InvalidArgument, "write failed: " + path.string());
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    auto end_row = [&]() {
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
    };
    for (int ci; (ci = in.get()) != EOF;) {
        const char c = static_cast<char>(ci);
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field += '"';
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') quoted = true;
        else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            end_row();
        } else if (c == '\n') end_row();
        else field += c;
    }
    if (quoted) throw RegistrationError(ErrorCode::ParseError, "csv: unterminated quoted field");
    if (any || !row.empty()) end_row();
    return rows;
}

namespace {

double to_double(const std::string& s, std::size_t line)
{
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw RegistrationError(ErrorCode::ParseError, "csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

std::size_t to_size(const std::string& s, std::size_t line)
{
    std::size_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw RegistrationError(ErrorCode::ParseError, "csv line " + std::to_string(line) + ": bad integer '" + s + "'");
    return v;
}

}  // namespace

std::vector<BenchRecord> read_csv(std::istream& in)
{
    const auto rows = parse_csv(in);
    if (rows.empty()) throw RegistrationError(ErrorCode::ParseError, "csv: empty document");
    const auto& h = rows.front();
    bool header_ok = h.size() == kCsvColumns.size();
    for (std::size_t i = 0; header_ok && i < h.size(); ++i) header_ok = h[i] == kCsvColumns[i];
    if (!header_ok) throw RegistrationError(ErrorCode::ParseError, "csv: header does not match the record schema");

    std::vector<BenchRecord> out;
    for (std::size_t li = 1; li < rows.size(); ++li) {
        const auto& f = rows[li];
        const std::size_t line = li + 1;
        if (f.size() != kCsvColumns.size())
            throw RegistrationError(ErrorCode::ParseError, "csv line " + std::to_string(line) + ": wrong field count");
        BenchRecord r;
        r.experiment = f[0];
        r.solver = f[1];
        r.sigma = to_double(f[2], line);
        r.outlier_ratio = to_double(f[3], line);
        r.trial = to_size(f[4], line);
        if (!f[5].empty()) r.rotation_error = to_double(f[5], line);
        if (!f[6].empty()) r.translation_error = to_double(f[6], line);
        r.cpu_time = to_double(f[7], line);
        r.outliers_injected = to_size(f[8], line);
        r.outliers_detected = to_size(f[9], line);
        r.inliers_rejected = to_size(f[10], line);
        r.status = f[11];
        r.note = f[12];
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace mpreg::bench
