#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "splf/integrator.hpp"
#include "splf/spectral_core.hpp"

namespace splf {

// Binary snapshot, little-endian:
//   "SPLF" | u32 version | u32 d | u32 n | u32 mode count |
//   per canonical mode (lexicographic): d x i32 z, then d x (f64 re, f64 im)
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const SpectralField& field);
void write_snapshot(const std::filesystem::path& file, const SpectralField& field);

/// Throws Error on a bad header, truncated body, or a field that is not
/// divergence-free.
SpectralField read_snapshot(std::istream& in);
SpectralField read_snapshot(const std::filesystem::path& file);

/// Header plus one row per recorded time: t, normL2sq, normVp1_p, int_diss,
/// int_gammaXX, then the coordinates; %.17g floats.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec);

}  // namespace splf
