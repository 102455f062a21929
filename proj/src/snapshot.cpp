#include "mflab/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace mflab {

namespace {

constexpr char kMagic[4] = {'M', 'F', 'L', 'B'};
constexpr std::uint32_t kVersion = 1;

static_assert(sizeof(double) == 8, "snapshot format assumes 8-byte doubles");

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("snapshot: truncated file");
  return v;
}

}  // namespace

void write_snapshot(const ScalarField& f, const std::string& path,
                    double time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("snapshot: cannot open " + path + " for write");
  const HalfPlaneGrid& g = f.grid();
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<double>(out, g.Lx);
  put<double>(out, g.Ly);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny));
  put<double>(out, time);
  put<std::uint32_t>(out, 0u);
  std::vector<double> row(g.ny);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) row[j] = f(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw FormatError("snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("snapshot: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("snapshot: bad magic in " + path);
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion)
    throw FormatError("snapshot: unsupported version " +
                      std::to_string(version));
  const double Lx = get<double>(in);
  const double Ly = get<double>(in);
  const auto nx = get<std::uint32_t>(in);
  const auto ny = get<std::uint32_t>(in);
  const double time = get<double>(in);
  (void)get<std::uint32_t>(in);  // reserved
  if (nx < 3 || ny < 3 || nx > 100000 || ny > 100000 || !(Lx > 0) || !(Ly > 0))
    throw FormatError("snapshot: implausible header in " + path);
  Snapshot s;
  s.time = time;
  s.field = ScalarField(
      HalfPlaneGrid(Lx, Ly, static_cast<int>(nx), static_cast<int>(ny)));
  std::vector<double> row(ny);
  for (std::uint32_t i = 0; i < nx; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) throw FormatError("snapshot: truncated payload in " + path);
    for (std::uint32_t j = 0; j < ny; ++j)
      s.field(static_cast<int>(i), static_cast<int>(j)) = row[j];
  }
  return s;
}

Snapshot read_snapshot(const std::string& path,
                       const HalfPlaneGrid& expected) {
  Snapshot s = read_snapshot(path);
  if (s.field.grid() != expected)
    throw DimensionError("snapshot: grid in " + path +
                         " does not match the expected grid");
  return s;
}

void write_field_csv(const ScalarField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("csv: cannot open " + path + " for write");
  out << "x,y,value\n";
  out.precision(17);
  const HalfPlaneGrid& g = f.grid();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out << g.x(i) << ',' << g.y(j) << ',' << f(i, j) << '\n';
}

}  // namespace mflab
