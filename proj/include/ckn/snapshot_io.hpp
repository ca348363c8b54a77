#pragma once

#include <string>

#include "ckn/snapshot.hpp"

namespace ckn {

// Fixed binary layout, little-endian throughout:
//   bytes 0..3   magic "CKNF"
//   bytes 4..7   format version, u32 = 1
//   bytes 8..11  n_per_axis, u32
//   bytes 12..19 box_length, f64
//   bytes 20..27 time, f64
//   then 3 * n^3 f64 velocity samples, component-major, x fastest within
//   a component, then n^3 f64 pressure samples. No padding anywhere.
void write_snapshot(const FieldSnapshot& s, const std::string& path);

// Rebuilds the snapshot (spectral field and caches recomputed from the
// stored velocity bytes). Truncation, bad magic, or impossible headers
// raise IoError naming the byte offset.
FieldSnapshot read_snapshot(const std::string& path);

} // namespace ckn
