#pragma once

#include <cstdint>
#include <memory>

#include "evns/field.hpp"

namespace evns::spectral {

// Initial velocity fields, returned as spectra. Every builder here is
// exactly divergence-free on the grid (single trig modes, or a curl).

/// (a sin(2 pi mode y / L), 0, 0): the convection term vanishes on it.
SpectralVector shear_mode(std::shared_ptr<const Grid3> grid, double amplitude,
                          int mode);

/// a (sin X cos Y cos Z, -cos X sin Y cos Z, 0) with X = 2 pi x / L.
SpectralVector taylor_green(std::shared_ptr<const Grid3> grid,
                            double amplitude);

/// Curl of (0, 0, phi) with phi an amplitude-scaled bump of the given
/// support radius about the box center: a compactly supported swirl.
SpectralVector localized_vortex(std::shared_ptr<const Grid3> grid,
                                double amplitude, double support_radius);

/// Seeded Gaussian field with spectrum exp(-(|k| corr)^2 / 2), projected
/// divergence-free and scaled so sup |u| = amplitude. corr = 0 gives white
/// noise (no projection scaling issues; still projected).
SpectralVector random_smooth(std::shared_ptr<const Grid3> grid,
                             double amplitude, double corr,
                             std::uint64_t seed);

/// Plain white-noise vector field in physical space (not projected); used
/// by the mollifier inequality measurements.
VectorField white_noise(std::shared_ptr<const Grid3> grid, double stddev,
                        std::uint64_t seed);

}  // namespace evns::spectral
