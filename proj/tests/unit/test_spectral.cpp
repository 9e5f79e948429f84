#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "evns/field.hpp"
#include "evns/initial_data.hpp"
#include "evns/oseen.hpp"
#include "evns/rng.hpp"
#include "evns/spectral_ops.hpp"

using namespace evns;
using namespace evns::spectral;

namespace {

VectorField random_field(std::shared_ptr<const Grid3> g, std::uint64_t seed) {
  return white_noise(g, 1.0, seed);
}

double phys_l2_sq(const VectorField& u) {
  KahanSum acc;
  for (int c = 0; c < 3; ++c)
    for (double v : u.c[c]) acc.add(v * v);
  return acc.value() * u.grid->cell_volume();
}

}  // namespace

TEST_CASE("transform round trip and Parseval") {
  auto g = Grid3::make(32, 2.0 * pi);
  const VectorField u = random_field(g, 42);
  const SpectralVector hat = transform(u);
  const VectorField back = inverse_transform(hat);
  double worst = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < u.points(); ++i)
      worst = std::max(worst, std::abs(u.c[c][i] - back.c[c][i]));
  CHECK(worst < 1e-12);

  CHECK(l2_norm_sq(hat) == doctest::Approx(phys_l2_sq(u)).epsilon(1e-10));
}

TEST_CASE("real fields have Hermitian spectra") {
  auto g = Grid3::make(16, 1.0);
  const VectorField u = random_field(g, 9);
  const SpectralVector hat = transform(u);
  // On the kx = 0 plane the conjugate partner is stored: check it.
  const std::size_t n = g->n();
  const std::size_t half = n / 2 + 1;
  for (std::size_t iz = 1; iz < n; ++iz) {
    for (std::size_t iy = 1; iy < n; ++iy) {
      const auto a = hat.c[0][(iz * n + iy) * half];
      const auto b = hat.c[0][(((n - iz) % n) * n + (n - iy) % n) * half];
      CHECK(a.real() == doctest::Approx(b.real()).epsilon(1e-10));
      CHECK(a.imag() == doctest::Approx(-b.imag()).epsilon(1e-10));
    }
  }
}

TEST_CASE("spectral derivatives") {
  auto g = Grid3::make(32, 2.0 * pi);

  SUBCASE("gradient of a constant vanishes") {
    ScalarField c(g);
    for (auto& v : c.c[0]) v = 3.25;
    SpectralScalar hat(g);
    g->forward(c.c[0].data(), hat.c[0].data());
    const VectorField grad = inverse_transform(gradient(hat));
    CHECK(sup_norm(grad) < 1e-12);
  }

  SUBCASE("single mode differentiates exactly") {
    const int mode = 3;
    const double k = static_cast<double>(mode);
    ScalarField s(g);
    std::size_t idx = 0;
    for (std::size_t iz = 0; iz < g->n(); ++iz)
      for (std::size_t iy = 0; iy < g->n(); ++iy)
        for (std::size_t ix = 0; ix < g->n(); ++ix, ++idx)
          s.c[0][idx] = std::sin(k * g->coord(ix));
    SpectralScalar hat(g);
    g->forward(s.c[0].data(), hat.c[0].data());
    const VectorField grad = inverse_transform(gradient(hat));
    idx = 0;
    double worst = 0.0;
    for (std::size_t iz = 0; iz < g->n(); ++iz)
      for (std::size_t iy = 0; iy < g->n(); ++iy)
        for (std::size_t ix = 0; ix < g->n(); ++ix, ++idx)
          worst = std::max(worst, std::abs(grad.c[0][idx] -
                                           k * std::cos(k * g->coord(ix))));
    CHECK(worst < 1e-11);
    CHECK(sup_norm(VectorField{g}) == 0.0);
  }

  SUBCASE("divergence of a curl vanishes") {
    const SpectralVector u = localized_vortex(g, 1.0, 1.5);
    CHECK(max_abs_divergence(u) < 1e-12);
  }

  SUBCASE("div grad equals the spectral laplacian") {
    const VectorField w = random_field(g, 5);
    SpectralScalar hat(g);
    g->forward(w.c[0].data(), hat.c[0].data());
    const SpectralScalar a = divergence(gradient(hat));
    const SpectralScalar b = laplacian(hat);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.points(); ++i)
      worst = std::max(worst, std::abs(a.c[0][i] - b.c[0][i]));
    CHECK(worst < 1e-8);  // absolute, spectra carry N^3 scaling
  }
}

TEST_CASE("Leray projection") {
  auto g = Grid3::make(32, 2.0 * pi);

  SUBCASE("annihilates gradients") {
    const VectorField w = random_field(g, 6);
    SpectralScalar phi(g);
    g->forward(w.c[0].data(), phi.c[0].data());
    SpectralVector gp = gradient(phi);
    leray_project(gp);
    const VectorField out = inverse_transform(gp);
    CHECK(sup_norm(out) < 1e-9);
  }

  SUBCASE("idempotent, divergence-free, orthogonal") {
    SpectralVector u = transform(random_field(g, 7));
    SpectralVector pu = u;
    leray_project(pu);
    CHECK(max_abs_divergence(pu) < 1e-9);

    SpectralVector ppu = pu;
    leray_project(ppu);
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < u.points(); ++i)
        worst = std::max(worst, std::abs(ppu.c[c][i] - pu.c[c][i]));
    CHECK(worst < 1e-10);

    SpectralVector rest = u;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < u.points(); ++i)
        rest.c[c][i] -= pu.c[c][i];
    CHECK(std::abs(l2_inner(pu, rest)) <
          1e-10 * std::sqrt(l2_norm_sq(u)) * std::sqrt(l2_norm_sq(u)));
  }
}

TEST_CASE("dealiasing") {
  auto g = Grid3::make(32, 2.0 * pi);

  SUBCASE("in-band content is untouched and truncation is idempotent") {
    SpectralVector u = transform(random_field(g, 8));
    SpectralVector once = u;
    dealias(once);
    SpectralVector twice = once;
    dealias(twice);
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < u.points(); ++i)
        worst = std::max(worst, std::abs(once.c[c][i] - twice.c[c][i]));
    CHECK(worst == 0.0);
  }

  SUBCASE("product of in-band modes is exact after truncation") {
    // sin(3y) sin(5y) = (cos 2y - cos 8y)/2; modes 2 and 8 are inside the
    // cut for N = 32, so the grid product is exactly band-limited.
    ScalarField a(g), b(g);
    std::size_t idx = 0;
    for (std::size_t iz = 0; iz < g->n(); ++iz)
      for (std::size_t iy = 0; iy < g->n(); ++iy)
        for (std::size_t ix = 0; ix < g->n(); ++ix, ++idx) {
          const double y = g->coord(iy);
          a.c[0][idx] = std::sin(3.0 * y);
          b.c[0][idx] = std::sin(5.0 * y);
        }
    ScalarField prod(g);
    for (std::size_t i = 0; i < prod.points(); ++i)
      prod.c[0][i] = a.c[0][i] * b.c[0][i];
    SpectralScalar hat(g);
    g->forward(prod.c[0].data(), hat.c[0].data());
    dealias(hat);
    ScalarField back(g);
    g->inverse(hat.c[0].data(), back.c[0].data());
    idx = 0;
    double worst = 0.0;
    for (std::size_t iz = 0; iz < g->n(); ++iz)
      for (std::size_t iy = 0; iy < g->n(); ++iy)
        for (std::size_t ix = 0; ix < g->n(); ++ix, ++idx) {
          const double y = g->coord(iy);
          const double exact = 0.5 * (std::cos(2.0 * y) - std::cos(8.0 * y));
          worst = std::max(worst, std::abs(back.c[0][idx] - exact));
        }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("norms and diagnostics") {
  auto g = Grid3::make(32, 2.0 * pi);

  SUBCASE("zero field gives zero everything") {
    SpectralVector z(g);
    CHECK(l2_norm_sq(z) == 0.0);
    CHECK(grad_l2_norm_sq(z) == 0.0);
    CHECK(sobolev_norm(z, 2) == 0.0);
    CHECK(sup_derivative(z, 1) == 0.0);
  }

  SUBCASE("single shear mode has closed-form norms") {
    const double amp = 0.7;
    const int mode = 2;
    const SpectralVector u = shear_mode(g, amp, mode);
    const double l3 = std::pow(2.0 * pi, 3);
    CHECK(l2_norm_sq(u) == doctest::Approx(amp * amp * l3 / 2.0).epsilon(1e-12));
    const double k = static_cast<double>(mode);
    CHECK(grad_l2_norm_sq(u) ==
          doctest::Approx(k * k * amp * amp * l3 / 2.0).epsilon(1e-12));
    // ||u||_{m,2} = amp sqrt(L^3/2) sum_j k^j; V_m = amp k^m.
    for (int m : {0, 1, 2, 3}) {
      double expect = 0.0;
      for (int j = 0; j <= m; ++j) expect += std::pow(k, j);
      expect *= amp * std::sqrt(l3 / 2.0);
      CHECK(sobolev_norm(u, m) == doctest::Approx(expect).epsilon(1e-10));
      CHECK(sup_derivative(u, m) ==
            doctest::Approx(amp * std::pow(k, m)).epsilon(1e-10));
    }
  }

  SUBCASE("nonnegative weighted gradient energy") {
    Rng rng(12);
    const VectorField w = random_field(g, 13);
    SpectralVector u = transform(w);
    leray_project(u);
    ScalarField a(g);
    for (auto& v : a.c[0]) v = rng.uniform(0.0, 2.0);
    const TensorField grad_u = inverse_transform(gradient(u));
    CHECK(weighted_grad_energy(a, grad_u) >= 0.0);
  }
}

TEST_CASE("tail energy") {
  auto g = Grid3::make(32, 2.0 * pi);

  SUBCASE("compact support inside the ball leaves no tail") {
    const SpectralVector u = localized_vortex(g, 1.0, 1.2);
    const VectorField phys = inverse_transform(u);
    CHECK(tail_energy(phys, 2.4) <= 1e-8 * l2_norm_sq(u));
  }

  SUBCASE("constant field tail is half the outside volume times c^2") {
    VectorField u(g);
    const double c = 1.3;
    for (auto& v : u.c[0]) v = c;
    const double radius = 1.0;
    // independent count of grid cells outside the ball
    std::size_t outside = 0;
    const double mid = pi;
    for (std::size_t iz = 0; iz < g->n(); ++iz)
      for (std::size_t iy = 0; iy < g->n(); ++iy)
        for (std::size_t ix = 0; ix < g->n(); ++ix) {
          const double dx = g->coord(ix) - mid, dy = g->coord(iy) - mid,
                       dz = g->coord(iz) - mid;
          if (std::sqrt(dx * dx + dy * dy + dz * dz) >= radius) ++outside;
        }
    const double expect =
        0.5 * c * c * static_cast<double>(outside) * g->cell_volume();
    CHECK(tail_energy(u, radius) == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("monotone in the radius and bounded by the ramp variant") {
    const VectorField u = random_field(g, 21);
    double prev = tail_energy(u, 0.25);
    for (double r : {0.8, 1.6, 2.4}) {
      const double tr = tail_energy(u, r);
      CHECK(tr <= prev + 1e-14);
      prev = tr;
    }
    CHECK(tail_energy_ramp(u, 1.0, 2.0) <= tail_energy(u, 1.0) + 1e-14);
    CHECK(tail_energy(u, 2.0) <= tail_energy_ramp(u, 1.0, 2.0) + 1e-14);
  }

  SUBCASE("radius guard") {
    const VectorField u = random_field(g, 22);
    CHECK_THROWS_AS(tail_energy(u, pi + 0.1), evns::invalid_input);
  }
}

TEST_CASE("spectral derivative of a dealiased product matches FD") {
  // Smooth product differentiated spectrally vs centered differences of
  // the grid values: the FD error halves twice per grid doubling.
  auto error_at = [&](std::size_t n) {
    auto g = Grid3::make(n, 2.0 * pi);
    ScalarField a(g), b(g);
    std::size_t idx = 0;
    for (std::size_t iz = 0; iz < n; ++iz)
      for (std::size_t iy = 0; iy < n; ++iy)
        for (std::size_t ix = 0; ix < n; ++ix, ++idx) {
          const double x = g->coord(ix), y = g->coord(iy);
          a.c[0][idx] = std::sin(2.0 * x) * std::cos(y);
          b.c[0][idx] = std::cos(x) + 0.5 * std::sin(y);
        }
    ScalarField prod(g);
    for (std::size_t i = 0; i < prod.points(); ++i)
      prod.c[0][i] = a.c[0][i] * b.c[0][i];
    SpectralScalar hat(g);
    g->forward(prod.c[0].data(), hat.c[0].data());
    dealias(hat);
    const VectorField grad = inverse_transform(gradient(hat));
    ScalarField dealiased(g);
    g->inverse(hat.c[0].data(), dealiased.c[0].data());
    // centered differences of the dealiased grid values along x
    double worst = 0.0;
    const double inv2h = 0.5 / g->spacing();
    idx = 0;
    for (std::size_t iz = 0; iz < n; ++iz)
      for (std::size_t iy = 0; iy < n; ++iy)
        for (std::size_t ix = 0; ix < n; ++ix, ++idx) {
          const double fd = (dealiased.c[0][g->index((ix + 1) % n, iy, iz)] -
                             dealiased.c[0][g->index((ix + n - 1) % n, iy, iz)]) *
                            inv2h;
          worst = std::max(worst, std::abs(fd - grad.c[0][idx]));
        }
    return worst;
  };
  const double e32 = error_at(32);
  const double e64 = error_at(64);
  CHECK(e32 / e64 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("heat kernel semigroup on the grid") {
  // Q(s) * Q(t) = Q(s+t): sample both factors, convolve spectrally, and
  // compare with the direct sample of Q(s+t).
  auto g = Grid3::make(64, 20.0);
  const double nu = 1.0, s = 0.3, t = 0.5;
  oseen::Evaluator ev(nu);
  const double mid = 10.0;
  auto sample = [&](double tau) {
    ScalarField f(g);
    std::size_t idx = 0;
    for (std::size_t iz = 0; iz < g->n(); ++iz)
      for (std::size_t iy = 0; iy < g->n(); ++iy)
        for (std::size_t ix = 0; ix < g->n(); ++ix, ++idx)
          f.c[0][idx] = ev.heat_kernel(
              tau, {g->coord(ix) - mid, g->coord(iy) - mid,
                    g->coord(iz) - mid});
    return f;
  };
  const ScalarField qs = sample(s);
  const ScalarField qt = sample(t);
  SpectralScalar qs_hat(g), qt_hat(g);
  g->forward(qs.c[0].data(), qs_hat.c[0].data());
  g->forward(qt.c[0].data(), qt_hat.c[0].data());
  const double h3 = g->cell_volume();
  for (std::size_t i = 0; i < qs_hat.points(); ++i)
    qs_hat.c[0][i] *= qt_hat.c[0][i] * h3;
  ScalarField conv(g);
  g->inverse(qs_hat.c[0].data(), conv.c[0].data());

  // the convolution peak sits at the center offset; compare pointwise
  const ScalarField qst = sample(s + t);
  double worst = 0.0;
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < g->n(); ++iz)
    for (std::size_t iy = 0; iy < g->n(); ++iy)
      for (std::size_t ix = 0; ix < g->n(); ++ix, ++idx) {
        // conv is centered at 2*mid = box-periodic 0; shift by mid on each
        // axis to align with the direct sample.
        const std::size_t jx = (ix + g->n() / 2) % g->n();
        const std::size_t jy = (iy + g->n() / 2) % g->n();
        const std::size_t jz = (iz + g->n() / 2) % g->n();
        worst = std::max(worst, std::abs(conv.c[0][g->index(jx, jy, jz)] -
                                         qst.c[0][idx]));
      }
  CHECK(worst < 1e-10);
}
