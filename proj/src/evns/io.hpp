#pragma once

#include <array>
#include <string>
#include <vector>

#include "evns/field.hpp"
#include "evns/solver.hpp"
#include "evns/volterra.hpp"

namespace evns::io {

void ensure_dir(const std::string& path);

/// All CSV floats use %.17g so outputs round-trip bit exactly.
std::string format_double(double v);

void write_diagnostics_csv(const std::string& path,
                           const solver::Trajectory& traj);
void write_hm_csv(const std::string& path, const solver::Trajectory& traj);
void write_grid_function_csv(const std::string& path,
                             const volterra::GridFunction& f);
/// Rows (m, y, normalized_value) from the tensor-bound scans.
void write_scan_csv(const std::string& path,
                    const std::vector<std::array<double, 3>>& rows);
void write_text(const std::string& path, const std::string& content);

/// Flat binary snapshot: header (uint32 N, float64 L, uint32 components),
/// then components back to back as little-endian float64, x fastest.
template <int N>
void write_field(const std::string& path, const spectral::FieldN<N>& f);
template <int N>
spectral::FieldN<N> read_field(const std::string& path,
                               std::shared_ptr<const spectral::Grid3> grid);

}  // namespace evns::io
