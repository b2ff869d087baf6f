#pragma once

#include <string>

#include "normsol/grid.hpp"

namespace normsol {

/// Field snapshot file: magic "MBF1", then a fixed little-endian header
/// (N, p, domain kind + parameters, resolution, node count) followed by the
/// node values as 64-bit floats in node order (row-major).
void write_snapshot(const std::string& path, const Field& u, double p);

struct Snapshot {
  Field field;
  double p = 0.0;
};

/// Reads a snapshot, rebuilding the grid from the stored header.
Snapshot read_snapshot(const std::string& path);

}  // namespace normsol
