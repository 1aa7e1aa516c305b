#include "mslab/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "mslab/error.hpp"

namespace mslab {

namespace {

template <class T>
void put(std::ostream& os, T value) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char b[sizeof(T)];
  is.read(reinterpret_cast<char*>(b), sizeof(T));
  if (!is) fail(ErrorKind::Io, "truncated snapshot");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T value;
  std::memcpy(&value, b, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& os, const Field& f) {
  os.write("NLSF", 4);
  put<std::uint16_t>(os, kSnapshotVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(f.grid().dim()));
  put<std::uint64_t>(os, f.grid().n());
  put<double>(os, f.grid().half_length());
  put<double>(os, f.time());
  for (const auto& z : f.values()) {
    put<double>(os, z.real());
    put<double>(os, z.imag());
  }
  if (!os) fail(ErrorKind::Io, "snapshot write failed");
}

Field read_snapshot(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "NLSF", 4) != 0) fail(ErrorKind::Io, "bad snapshot magic");
  const auto version = get<std::uint16_t>(is);
  if (version != kSnapshotVersion) fail(ErrorKind::Io, "unsupported snapshot version");
  const int dim = get<std::uint8_t>(is);
  const auto n = get<std::uint64_t>(is);
  const double ell = get<double>(is);
  const double t = get<double>(is);
  GridSpec g(dim, n, ell);
  std::vector<cplx> v(g.size());
  for (auto& z : v) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    z = cplx(re, im);
  }
  return Field(g, std::move(v), t);
}

void write_snapshot(const std::filesystem::path& path, const Field& f) {
  write_snapshots(path, {f});
}

Field read_snapshot(const std::filesystem::path& path) {
  auto all = read_snapshots(path);
  return all.front();
}

void write_snapshots(const std::filesystem::path& path, const std::vector<Field>& channels) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  for (const auto& f : channels) write_snapshot(os, f);
}

std::vector<Field> read_snapshots(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::Io, "cannot open " + path.string());
  std::vector<Field> out;
  while (is.peek() != std::char_traits<char>::eof()) out.push_back(read_snapshot(is));
  if (out.empty()) fail(ErrorKind::Io, "empty snapshot file " + path.string());
  return out;
}

}  // namespace mslab
