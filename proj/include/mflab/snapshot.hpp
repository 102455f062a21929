#pragma once

#include <string>

#include "mflab/grid.hpp"

namespace mflab {

// Self-describing binary snapshot:
//   magic "MFLB" | u32 version | f64 Lx | f64 Ly | u32 nx | u32 ny
//   | f64 time | u32 reserved | row-major f64 payload (x-major)
// All integers and doubles little-endian.
struct Snapshot {
  ScalarField field;
  double time = 0.0;
};

void write_snapshot(const ScalarField& f, const std::string& path,
                    double time = 0.0);
Snapshot read_snapshot(const std::string& path);
// Reads and additionally checks the stored grid against an expected one;
// throws DimensionError on mismatch.
Snapshot read_snapshot(const std::string& path, const HalfPlaneGrid& expected);

// CSV export: header "x,y,value", one row per node.
void write_field_csv(const ScalarField& f, const std::string& path);

}  // namespace mflab
