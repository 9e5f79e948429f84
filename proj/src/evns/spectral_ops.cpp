#include "evns/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace evns::spectral {

namespace {
using cd = std::complex<double>;

double parseval_factor(const Grid3& g) {
  const double n3 = static_cast<double>(g.points());
  return g.box() * g.box() * g.box() / (n3 * n3);
}

/// i^j times k1^a1 k2^a2 k3^a3: the multiplier of D^alpha.
cd derivative_multiplier(int a1, int a2, int a3, double kx, double ky,
                         double kz) {
  const int j = (a1 + a2 + a3) % 4;
  const double mag =
      std::pow(kx, a1) * std::pow(ky, a2) * std::pow(kz, a3);
  switch (j) {
    case 0: return {mag, 0.0};
    case 1: return {0.0, mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, -mag};
  }
}

std::vector<std::array<int, 3>> multi_indices(int order) {
  std::vector<std::array<int, 3>> out;
  for (int a1 = 0; a1 <= order; ++a1)
    for (int a2 = 0; a2 + a1 <= order; ++a2)
      out.push_back({a1, a2, order - a1 - a2});
  return out;
}

/// Pointwise max over |alpha| = order of |D^alpha u(x)|^2 (Euclidean in
/// the components), as a grid array.
std::vector<double> max_derivative_sq(const SpectralVector& u, int order) {
  const auto& g = *u.grid;
  std::vector<double> best(g.points(), 0.0);
  std::array<std::vector<double>, 3> d;
  SpectralVector work(u.grid);
  for (const auto& alpha : multi_indices(order)) {
    for_each_mode(g, [&](std::size_t idx, double kx, double ky, double kz,
                         double) {
      const cd mul =
          derivative_multiplier(alpha[0], alpha[1], alpha[2], kx, ky, kz);
      for (int a = 0; a < 3; ++a) work.c[a][idx] = mul * u.c[a][idx];
    });
    for (int a = 0; a < 3; ++a) {
      d[a].resize(g.points());
      g.inverse(work.c[a].data(), d[a].data());
    }
    for (std::size_t i = 0; i < g.points(); ++i) {
      const double e2 =
          d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i];
      best[i] = std::max(best[i], e2);
    }
  }
  return best;
}

double radial_distance(const Grid3& g, std::size_t ix, std::size_t iy,
                       std::size_t iz) {
  const double c = 0.5 * g.box();
  const double dx = g.coord(ix) - c;
  const double dy = g.coord(iy) - c;
  const double dz = g.coord(iz) - c;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

template <typename Weight>
double weighted_energy(const VectorField& u, Weight&& w) {
  const auto& g = *u.grid;
  KahanSum acc;
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < g.n(); ++iz) {
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
      for (std::size_t ix = 0; ix < g.n(); ++ix, ++idx) {
        const double wt = w(ix, iy, iz);
        if (wt == 0.0) continue;
        const double e2 = u.c[0][idx] * u.c[0][idx] +
                          u.c[1][idx] * u.c[1][idx] +
                          u.c[2][idx] * u.c[2][idx];
        acc.add(wt * e2);
      }
    }
  }
  return acc.value() * g.cell_volume();
}

}  // namespace

SpectralVector gradient(const SpectralScalar& s) {
  SpectralVector out(s.grid);
  for_each_mode(*s.grid,
                [&](std::size_t idx, double kx, double ky, double kz, double) {
                  const cd v = s.c[0][idx];
                  out.c[0][idx] = cd(0, kx) * v;
                  out.c[1][idx] = cd(0, ky) * v;
                  out.c[2][idx] = cd(0, kz) * v;
                });
  return out;
}

SpectralTensor gradient(const SpectralVector& u) {
  SpectralTensor out(u.grid);
  for_each_mode(*u.grid,
                [&](std::size_t idx, double kx, double ky, double kz, double) {
                  const double k[3] = {kx, ky, kz};
                  for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                      out.c[3 * i + j][idx] = cd(0, k[j]) * u.c[i][idx];
                });
  return out;
}

SpectralScalar divergence(const SpectralVector& u) {
  SpectralScalar out(u.grid);
  for_each_mode(*u.grid,
                [&](std::size_t idx, double kx, double ky, double kz, double) {
                  out.c[0][idx] = cd(0, kx) * u.c[0][idx] +
                                  cd(0, ky) * u.c[1][idx] +
                                  cd(0, kz) * u.c[2][idx];
                });
  return out;
}

SpectralVector divergence(const SpectralTensor& x) {
  SpectralVector out(x.grid);
  for_each_mode(*x.grid,
                [&](std::size_t idx, double kx, double ky, double kz, double) {
                  const double k[3] = {kx, ky, kz};
                  for (int i = 0; i < 3; ++i) {
                    cd v{0.0, 0.0};
                    for (int j = 0; j < 3; ++j)
                      v += cd(0, k[j]) * x.c[3 * i + j][idx];
                    out.c[i][idx] = v;
                  }
                });
  return out;
}

SpectralScalar laplacian(const SpectralScalar& s) {
  SpectralScalar out(s.grid);
  for_each_mode(*s.grid,
                [&](std::size_t idx, double kx, double ky, double kz, double) {
                  out.c[0][idx] = -(kx * kx + ky * ky + kz * kz) * s.c[0][idx];
                });
  return out;
}

void leray_project(SpectralVector& u) {
  for_each_mode(*u.grid,
                [&](std::size_t idx, double kx, double ky, double kz, double) {
                  const double k2 = kx * kx + ky * ky + kz * kz;
                  if (k2 == 0.0) return;
                  const cd kdotu =
                      kx * u.c[0][idx] + ky * u.c[1][idx] + kz * u.c[2][idx];
                  const cd s = kdotu / k2;
                  u.c[0][idx] -= kx * s;
                  u.c[1][idx] -= ky * s;
                  u.c[2][idx] -= kz * s;
                });
}

template <int N>
void dealias(SpectralN<N>& s) {
  const auto& g = *s.grid;
  const std::size_t n = g.n();
  const std::size_t half = n / 2 + 1;
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < n; ++iz) {
    for (std::size_t iy = 0; iy < n; ++iy) {
      for (std::size_t ix = 0; ix < half; ++ix, ++idx) {
        if (!g.in_band(ix, iy, iz)) {
          for (int a = 0; a < N; ++a) s.c[a][idx] = {0.0, 0.0};
        }
      }
    }
  }
}

template void dealias<1>(SpectralN<1>&);
template void dealias<3>(SpectralN<3>&);
template void dealias<9>(SpectralN<9>&);

double l2_inner(const SpectralVector& a, const SpectralVector& b) {
  KahanSum acc;
  for_each_mode(*a.grid, [&](std::size_t idx, double, double, double,
                             double w) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
      s += a.c[c][idx].real() * b.c[c][idx].real() +
           a.c[c][idx].imag() * b.c[c][idx].imag();
    acc.add(w * s);
  });
  return acc.value() * parseval_factor(*a.grid);
}

double l2_norm_sq(const SpectralVector& u) { return l2_inner(u, u); }

double grad_l2_norm_sq(const SpectralVector& u) {
  KahanSum acc;
  for_each_mode(*u.grid,
                [&](std::size_t idx, double kx, double ky, double kz,
                    double w) {
                  const double k2 = kx * kx + ky * ky + kz * kz;
                  if (k2 == 0.0) return;
                  double s = 0.0;
                  for (int c = 0; c < 3; ++c) s += std::norm(u.c[c][idx]);
                  acc.add(w * k2 * s);
                });
  return acc.value() * parseval_factor(*u.grid);
}

double sup_norm(const VectorField& u) {
  double best = 0.0;
  for (std::size_t i = 0; i < u.points(); ++i) {
    const double e2 = u.c[0][i] * u.c[0][i] + u.c[1][i] * u.c[1][i] +
                      u.c[2][i] * u.c[2][i];
    best = std::max(best, e2);
  }
  return std::sqrt(best);
}

double max_abs(const ScalarField& f) {
  double best = 0.0;
  for (double v : f.c[0]) best = std::max(best, std::abs(v));
  return best;
}

double sobolev_norm(const SpectralVector& u, int m) {
  require(m >= 0, "sobolev_norm needs m >= 0");
  const auto& g = *u.grid;
  double total = 0.0;
  for (int j = 0; j <= m; ++j) {
    const auto best = max_derivative_sq(u, j);
    KahanSum acc;
    for (double b : best) acc.add(b);
    total += std::sqrt(acc.value() * g.cell_volume());
  }
  return total;
}

double sup_derivative(const SpectralVector& u, int m) {
  const auto best = max_derivative_sq(u, m);
  double v = 0.0;
  for (double b : best) v = std::max(v, b);
  return std::sqrt(v);
}

double max_abs_divergence(const SpectralVector& u) {
  const SpectralScalar d = divergence(u);
  ScalarField phys = inverse_transform(d);
  return max_abs(phys);
}

double tail_energy(const VectorField& u, double radius) {
  require(radius < 0.5 * u.grid->box(), "tail radius must be below L/2");
  require(radius >= 0.0, "tail radius must be nonnegative");
  const auto& g = *u.grid;
  return 0.5 * weighted_energy(u, [&](std::size_t ix, std::size_t iy,
                                      std::size_t iz) {
    return radial_distance(g, ix, iy, iz) >= radius ? 1.0 : 0.0;
  });
}

double tail_energy_ramp(const VectorField& u, double r1, double r2) {
  require(r1 >= 0.0 && r2 > r1, "need 0 <= r1 < r2");
  require(r2 < 0.5 * u.grid->box(), "outer radius must be below L/2");
  const auto& g = *u.grid;
  return 0.5 * weighted_energy(u, [&](std::size_t ix, std::size_t iy,
                                      std::size_t iz) {
    const double r = radial_distance(g, ix, iy, iz);
    if (r <= r1) return 0.0;
    if (r >= r2) return 1.0;
    return (r - r1) / (r2 - r1);
  });
}

double ball_l2_distance(const VectorField& a, const VectorField& b,
                        double radius) {
  require(a.grid == b.grid, "fields must share a grid");
  const auto& g = *a.grid;
  KahanSum acc;
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < g.n(); ++iz) {
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
      for (std::size_t ix = 0; ix < g.n(); ++ix, ++idx) {
        if (radial_distance(g, ix, iy, iz) >= radius) continue;
        double s = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double d = a.c[c][idx] - b.c[c][idx];
          s += d * d;
        }
        acc.add(s);
      }
    }
  }
  return std::sqrt(acc.value() * g.cell_volume());
}

double weighted_grad_energy(const ScalarField& a, const TensorField& g) {
  require(a.grid == g.grid, "fields must share a grid");
  KahanSum acc;
  for (std::size_t i = 0; i < a.points(); ++i) {
    double s = 0.0;
    for (int c = 0; c < 9; ++c) s += g.c[c][i] * g.c[c][i];
    acc.add(a.c[0][i] * s);
  }
  return acc.value() * a.grid->cell_volume();
}

}  // namespace evns::spectral
