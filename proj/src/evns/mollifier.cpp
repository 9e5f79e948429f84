#include "evns/mollifier.hpp"

#include <cmath>

#include "evns/quadrature.hpp"

namespace evns::mollifier {

namespace {

double bump_raw(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

}  // namespace

MollifierKernel::MollifierKernel() {
  const double mass = 4.0 * pi *
                      integrate([](double r) { return r * r * bump_raw(r); },
                                0.0, 1.0, 1e-14);
  normalization_ = 1.0 / mass;
}

double MollifierKernel::value(double r) const {
  return normalization_ * bump_raw(r);
}

const MollifierKernel& standard_kernel() {
  static const MollifierKernel kernel;
  return kernel;
}

ScalarField sampled_kernel(std::shared_ptr<const Grid3> grid, double eps,
                           double cx, double cy, double cz) {
  const auto& kernel = standard_kernel();
  const auto& g = *grid;
  ScalarField rho(grid);
  const double l = g.box();
  const auto min_image = [l](double d) {
    d = std::fmod(d + 1.5 * l, l) - 0.5 * l;
    return d;
  };
  KahanSum mass;
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < g.n(); ++iz) {
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
      for (std::size_t ix = 0; ix < g.n(); ++ix, ++idx) {
        const double dx = min_image(g.coord(ix) - cx);
        const double dy = min_image(g.coord(iy) - cy);
        const double dz = min_image(g.coord(iz) - cz);
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        const double v = kernel.value(r / eps) / (eps * eps * eps);
        rho.c[0][idx] = v;
        mass.add(v);
      }
    }
  }
  // Renormalize the discrete mass so convolving a constant is exact.
  const double scale = 1.0 / (mass.value() * g.cell_volume());
  for (auto& v : rho.c[0]) v *= scale;
  return rho;
}

BarOperator::BarOperator(std::shared_ptr<const Grid3> grid, double eps)
    : grid_(std::move(grid)), eps_(eps) {
  const auto& g = *grid_;
  require(eps >= 2.0 * g.spacing(),
          "mollifier scale below the resolution guard (eps >= 2h)");
  require(eps <= 0.5 * g.box(),
          "mollifier support must fit inside the box (eps <= L/2)");

  const ScalarField rho = sampled_kernel(grid_, eps);
  std::vector<std::complex<double>> hat(g.spectral_points());
  g.forward(rho.c[0].data(), hat.data());

  multiplier_.resize(g.spectral_points());
  const double h3 = g.cell_volume();
  double max_imag = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    multiplier_[i] = hat[i].real() * h3;
    max_imag = std::max(max_imag, std::abs(hat[i].imag()) * h3);
  }
  require(max_imag < 1e-10, "mollifier multiplier acquired an imaginary part");
  require(std::abs(multiplier_[0] - 1.0) < 1e-12,
          "mollifier zero mode must be one after renormalization");
  multiplier_[0] = 1.0;  // snap: constants pass through exactly

}

double derivative_bound_ratio(const VectorField& u, const BarOperator& bar,
                              int m) {
  require(m >= 0 && m <= 4, "derivative bound ratio supports m <= 4");
  SpectralVector hat = spectral::transform(u);
  const double l2 = std::sqrt(spectral::l2_norm_sq(hat));
  if (l2 == 0.0) return 0.0;
  bar.apply_in_place(hat);
  const double sup = spectral::sup_derivative(hat, m);
  return sup * std::pow(bar.eps(), 1.5 + m) / l2;
}

double approximation_ratio(const VectorField& u, const BarOperator& bar,
                           int m) {
  require(m >= 1 && m <= 4, "approximation ratio needs 1 <= m <= 4");
  SpectralVector hat = spectral::transform(u);
  const double denom = spectral::sobolev_norm(hat, m - 1);
  SpectralVector diff = hat;
  bar.apply_in_place(diff);
  for (int a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < diff.points(); ++i)
      diff.c[a][i] -= hat.c[a][i];
  const double num = spectral::sobolev_norm(diff, m);
  if (num == 0.0) return 0.0;
  return num / (bar.eps() * denom);
}

VectorField extremal_field(std::shared_ptr<const Grid3> grid, double eps,
                           int a1, int a2, int a3) {
  const auto& g = *grid;
  const double c = 0.5 * g.box();
  const ScalarField rho = sampled_kernel(grid, eps, c, c, c);
  spectral::SpectralScalar hat(grid);
  g.forward(rho.c[0].data(), hat.c[0].data());
  spectral::for_each_mode(
      g, [&](std::size_t idx, double kx, double ky, double kz, double) {
        const int order = a1 + a2 + a3;
        const double mag =
            std::pow(kx, a1) * std::pow(ky, a2) * std::pow(kz, a3);
        std::complex<double> mul;
        switch (order % 4) {
          case 0: mul = {mag, 0.0}; break;
          case 1: mul = {0.0, mag}; break;
          case 2: mul = {-mag, 0.0}; break;
          default: mul = {0.0, -mag}; break;
        }
        hat.c[0][idx] *= mul;
      });
  VectorField out(grid);
  g.inverse(hat.c[0].data(), out.c[0].data());
  return out;
}

}  // namespace evns::mollifier
