#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mslab/field.hpp"

namespace mslab {

// Binary record: "NLSF", u16 version, u8 dim, u64 n, f64 l, f64 t, n^d (f64 re, f64 im).
// All little-endian. A file may hold several consecutive records (channels).
inline constexpr std::uint16_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& os, const Field& f);
Field read_snapshot(std::istream& is);

void write_snapshot(const std::filesystem::path& path, const Field& f);
Field read_snapshot(const std::filesystem::path& path);

void write_snapshots(const std::filesystem::path& path, const std::vector<Field>& channels);
std::vector<Field> read_snapshots(const std::filesystem::path& path);

}  // namespace mslab
