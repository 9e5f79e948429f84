#include "evns/initial_data.hpp"

#include <cmath>

#include "evns/rng.hpp"
#include "evns/spectral_ops.hpp"

namespace evns::spectral {

SpectralVector shear_mode(std::shared_ptr<const Grid3> grid, double amplitude,
                          int mode) {
  require(mode != 0 && std::abs(mode) < static_cast<int>(grid->n()) / 3,
          "shear mode must be nonzero and inside the dealiased band");
  VectorField u(grid);
  const auto& g = *grid;
  const double k = 2.0 * pi * mode / g.box();
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < g.n(); ++iz)
    for (std::size_t iy = 0; iy < g.n(); ++iy)
      for (std::size_t ix = 0; ix < g.n(); ++ix, ++idx)
        u.c[0][idx] = amplitude * std::sin(k * g.coord(iy));
  return transform(u);
}

SpectralVector taylor_green(std::shared_ptr<const Grid3> grid,
                            double amplitude) {
  VectorField u(grid);
  const auto& g = *grid;
  const double k = 2.0 * pi / g.box();
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < g.n(); ++iz) {
    const double cz = std::cos(k * g.coord(iz));
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
      const double sy = std::sin(k * g.coord(iy));
      const double cy = std::cos(k * g.coord(iy));
      for (std::size_t ix = 0; ix < g.n(); ++ix, ++idx) {
        const double sx = std::sin(k * g.coord(ix));
        const double cx = std::cos(k * g.coord(ix));
        u.c[0][idx] = amplitude * sx * cy * cz;
        u.c[1][idx] = -amplitude * cx * sy * cz;
      }
    }
  }
  return transform(u);
}

SpectralVector localized_vortex(std::shared_ptr<const Grid3> grid,
                                double amplitude, double support_radius) {
  require(support_radius > 0.0 && support_radius < 0.5 * grid->box(),
          "vortex support must fit inside the box");
  const auto& g = *grid;
  ScalarField phi(grid);
  const double c = 0.5 * g.box();
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < g.n(); ++iz) {
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
      for (std::size_t ix = 0; ix < g.n(); ++ix, ++idx) {
        const double rx = g.coord(ix) - c;
        const double ry = g.coord(iy) - c;
        const double rz = g.coord(iz) - c;
        const double s2 =
            (rx * rx + ry * ry + rz * rz) / (support_radius * support_radius);
        // (1 - s^2)^8: C^7 with exact zeros outside, and enough spectral
        // decay that the curl's interpolation ringing stays near roundoff
        // at desk-scale grids (the classical bump leaks ~1e-6 there).
        phi.c[0][idx] =
            s2 >= 1.0 ? 0.0 : amplitude * std::pow(1.0 - s2, 8);
      }
    }
  }
  SpectralScalar phat(grid);
  g.forward(phi.c[0].data(), phat.c[0].data());
  // u = curl (0, 0, phi) = (d_y phi, -d_x phi, 0): solenoidal by construction.
  SpectralVector u(grid);
  for_each_mode(g, [&](std::size_t i, double kx, double ky, double, double) {
    const std::complex<double> v = phat.c[0][i];
    u.c[0][i] = std::complex<double>(0, ky) * v;
    u.c[1][i] = std::complex<double>(0, -kx) * v;
  });
  return u;
}

SpectralVector random_smooth(std::shared_ptr<const Grid3> grid,
                             double amplitude, double corr,
                             std::uint64_t seed) {
  VectorField noise = white_noise(grid, 1.0, seed);
  SpectralVector hat = transform(noise);
  if (corr > 0.0) {
    for_each_mode(*grid,
                  [&](std::size_t i, double kx, double ky, double kz, double) {
                    const double k2 = kx * kx + ky * ky + kz * kz;
                    const double damp = std::exp(-0.5 * k2 * corr * corr);
                    for (int a = 0; a < 3; ++a) hat.c[a][i] *= damp;
                  });
  }
  leray_project(hat);
  dealias(hat);
  const VectorField u = inverse_transform(hat);
  const double sup = sup_norm(u);
  if (sup > 0.0) {
    const double scale = amplitude / sup;
    for (int a = 0; a < 3; ++a)
      for (auto& v : hat.c[a]) v *= scale;
  }
  return hat;
}

VectorField white_noise(std::shared_ptr<const Grid3> grid, double stddev,
                        std::uint64_t seed) {
  VectorField u(grid);
  Rng rng(seed);
  for (int a = 0; a < 3; ++a)
    for (auto& v : u.c[a]) v = rng.normal(0.0, stddev);
  return u;
}

}  // namespace evns::spectral
