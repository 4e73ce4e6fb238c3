/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   csv.h
 * @brief  Benchmark records and their CSV form (RFC 4180: CRLF line ends,
 *         fields quoted when they hold a comma, quote, CR or LF).
 */
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mpreg::bench {

struct BenchRecord {
    std::string experiment;
    std::string solver;  ///< e.g. "horn", "olae+st", "olae+robust"
    double sigma = 0.0;
    double outlier_ratio = 0.0;
    std::size_t trial = 0;
    /// Empty on failed rows.
    std::optional<double> rotation_error;     ///< rad
    std::optional<double> translation_error;  ///< scene units
    double cpu_time = 0.0;                    ///< s, solver only
    std::size_t outliers_injected = 0;
    std::size_t outliers_detected = 0;  ///< injected outliers that were flagged
    std::size_t inliers_rejected = 0;   ///< clean pairs that were flagged
    std::string status = "ok";          ///< "ok", "not_converged" or "failed:<Code>"
    std::string note;
};

inline constexpr std::array<std::string_view, 13> kCsvColumns{
    "experiment",  "solver",     "sigma",    "outlier_ratio",     "trial",
    "rotation_error", "translation_error", "cpu_time", "outliers_injected",
    "outliers_detected", "inliers_rejected", "status", "note"};

/// Quotes a field only when needed.
std::string csv_escape(std::string_view field);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

void write_csv(std::ostream& out, const std::vector<BenchRecord>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& rows);

/// Parses one CSV document into rows of fields (header included).
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

/// Reads records written by write_csv. Throws ParseError on a header
/// mismatch or malformed field.
std::vector<BenchRecord> read_csv(std::istream& in);

}  // namespace mpreg::bench
