#include "evns/eddy_viscosity.hpp"

#include <cmath>

#include "evns/spectral_ops.hpp"

namespace evns::solver {

EddyViscosity EddyViscosity::zero() { return {}; }

EddyViscosity EddyViscosity::bump(double amplitude, double r0) {
  require(amplitude >= 0.0, "eddy viscosity amplitude must be nonnegative");
  require(r0 > 0.0, "eddy viscosity support radius must be positive");
  EddyViscosity a;
  a.support_radius = r0;
  a.rule = [amplitude, r0](double, double rx, double ry, double rz) {
    const double s2 = (rx * rx + ry * ry + rz * rz) / (r0 * r0);
    if (s2 >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - s2));
  };
  return a;
}

ScalarField EddyViscosity::sample(std::shared_ptr<const Grid3> grid,
                                  double t) const {
  ScalarField a(grid);
  if (is_zero()) return a;
  const auto& g = *grid;
  const double c = 0.5 * g.box();
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < g.n(); ++iz) {
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
      for (std::size_t ix = 0; ix < g.n(); ++ix, ++idx) {
        const double rx = g.coord(ix) - c;
        const double ry = g.coord(iy) - c;
        const double rz = g.coord(iz) - c;
        const double v = rule(t, rx, ry, rz);
        require(v >= 0.0, "eddy viscosity must be nonnegative");
        if (support_radius > 0.0 &&
            rx * rx + ry * ry + rz * rz >= support_radius * support_radius)
          require(v == 0.0, "eddy viscosity leaks outside its support radius");
        a.c[0][idx] = v;
      }
    }
  }
  return a;
}

double EddyViscosity::sup_sample(std::shared_ptr<const Grid3> grid,
                                 double t) const {
  const ScalarField a = sample(grid, t);
  return spectral::max_abs(a);
}

double EddyViscosity::grad_sup_estimate(std::shared_ptr<const Grid3> grid,
                                        double t) const {
  if (is_zero()) return 0.0;
  const ScalarField a = sample(grid, t);
  const auto& g = *grid;
  const std::size_t n = g.n();
  const double inv2h = 0.5 / g.spacing();
  double best = 0.0;
  for (std::size_t iz = 0; iz < n; ++iz) {
    for (std::size_t iy = 0; iy < n; ++iy) {
      for (std::size_t ix = 0; ix < n; ++ix) {
        const auto val = [&](std::size_t jx, std::size_t jy, std::size_t jz) {
          return a.c[0][g.index(jx % n, jy % n, jz % n)];
        };
        const double gx = (val(ix + 1, iy, iz) - val(ix + n - 1, iy, iz)) * inv2h;
        const double gy = (val(ix, iy + 1, iz) - val(ix, iy + n - 1, iz)) * inv2h;
        const double gz = (val(ix, iy, iz + 1) - val(ix, iy, iz + n - 1)) * inv2h;
        best = std::max(best, std::sqrt(gx * gx + gy * gy + gz * gz));
      }
    }
  }
  return best;
}

}  // namespace evns::solver
