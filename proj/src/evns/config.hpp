#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evns/eddy_viscosity.hpp"
#include "evns/solver.hpp"

namespace evns::config {

/// A fully specified run: solver settings, eddy viscosity, initial datum.
/// Parsed from the plain-text key=value format (one pair per line, '#'
/// comments). Unknown keys are rejected. Lengths accept a trailing 'h'
/// to mean multiples of the grid spacing L/N.
struct RunSpec {
  solver::SolverConfig solver;
  std::string a_kind = "zero";  // zero | bump
  double a_radius = 0.0;
  double a_amplitude = 0.0;
  std::string u0_kind;  // shear_mode | taylor_green | localized_vortex |
                        // random_smooth
  double u0_amplitude = 1.0;
  int u0_mode = 2;        // shear_mode
  double u0_radius = 0.0; // localized_vortex
  double u0_corr = 0.5;   // random_smooth
  std::uint64_t seed = 1;
  std::string out_dir;
  std::vector<double> eps_list;          // nse-sweep only
  std::vector<double> sweep_sample_times;
  double sweep_ball_radius = -1.0;

  solver::EddyViscosity eddy() const;
  spectral::SpectralVector build_u0(
      std::shared_ptr<const spectral::Grid3> grid) const;
  void validate_for_run() const;
  void validate_for_sweep() const;
};

RunSpec parse_config_text(const std::string& text);
RunSpec parse_config_file(const std::string& path);

}  // namespace evns::config
