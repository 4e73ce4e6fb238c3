/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   ply.h
 * @brief  Minimal PLY point cloud I/O (vertex x, y, z only).
 */
#pragma once

#include <mpreg/icp.h>

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace mpreg::bench {

enum class PlyEncoding { Ascii, BinaryLittleEndian };

/// Reads the vertex element of an ASCII or binary little-endian PLY file.
/// Other elements and vertex properties are skipped.
/// Throws ParseError (with line or byte offset) or UnsupportedFormat.
MetricMap load_ply(const std::filesystem::path& path);
MetricMap load_ply(std::istream& in, const std::string& source_name = "<stream>");

/// Writes map.points as doubles. ASCII output uses round-trip precision, so
/// write -> load -> write reproduces the file byte for byte.
void write_ply(const std::filesystem::path& path, const MetricMap& map,
               PlyEncoding enc = PlyEncoding::Ascii);
void write_ply(std::ostream& out, const MetricMap& map, PlyEncoding enc = PlyEncoding::Ascii);

/// Picks n points: shuffle the indices with `seed`, then take every
/// (size/n)-th one. n >= size returns a permutation of all points.
MetricMap downsample(const MetricMap& map, std::size_t n, std::uint64_t seed = 0);

}  // namespace mpreg::bench
