#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "evns/initial_data.hpp"
#include "evns/solver.hpp"
#include "evns/spectral_ops.hpp"

using namespace evns;
using namespace evns::spectral;
using namespace evns::solver;

namespace {

SolverConfig small_config() {
  SolverConfig cfg;
  cfg.n = 32;
  cfg.box = 2.0 * pi;
  cfg.nu = 0.1;
  cfg.eps = 8.0 * cfg.spacing();
  cfg.horizon = 0.125;
  cfg.dt = 1.0 / 128.0;
  cfg.picard_tol = 1e-11;
  cfg.hm_every = 0;
  return cfg;
}

double spectral_max_diff(const SpectralVector& a, const SpectralVector& b) {
  double worst = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.points(); ++i)
      worst = std::max(worst, std::abs(a.c[c][i] - b.c[c][i]));
  return worst;
}

}  // namespace

TEST_CASE("tensor assembly X") {
  SolverConfig cfg = small_config();

  SUBCASE("zero velocity gives zero X") {
    Solver solver(cfg, EddyViscosity::zero());
    const SpectralTensor x =
        solver.compute_X(SpectralVector(solver.grid()), 0.0);
    for (int c = 0; c < 9; ++c)
      for (const auto& v : x.c[c]) CHECK(std::abs(v) == 0.0);
  }

  SUBCASE("shear mode produces only the (1,1) entry, a function of y") {
    Solver solver(cfg, EddyViscosity::zero());
    const SpectralVector u = shear_mode(solver.grid(), 0.8, 2);
    const spectral::TensorField x =
        inverse_transform(solver.compute_X(u, 0.0));
    const auto& g = *solver.grid();
    double off = 0.0;
    for (int c = 1; c < 9; ++c)
      for (double v : x.c[c]) off = std::max(off, std::abs(v));
    CHECK(off < 1e-12);
    // X_11 must not vary along x or z
    double vary = 0.0;
    for (std::size_t iz = 0; iz < g.n(); ++iz)
      for (std::size_t iy = 0; iy < g.n(); ++iy)
        for (std::size_t ix = 0; ix < g.n(); ++ix)
          vary = std::max(vary, std::abs(x.c[0][g.index(ix, iy, iz)] -
                                         x.c[0][g.index(0, iy, 0)]));
    CHECK(vary < 1e-12);
  }

  SUBCASE("dissipativity identity of the eddy term") {
    // <-div bar(A grad u_bar), u> = int A |grad u_bar|^2 >= 0; the grid-sum
    // route and the spectral route must agree to roundoff.
    SolverConfig cfg2 = cfg;
    Solver solver(cfg2, EddyViscosity::bump(0.5, 1.5));
    auto grid = solver.grid();
    for (std::uint64_t s = 0; s < 5; ++s) {
      const SpectralVector u =
          solver.prepare_initial(random_smooth(grid, 1.0, 0.5, 40 + s));
      const double power = solver.eddy_power(u, 0.0);
      CHECK(power >= 0.0);

      // spectral route: assemble bar(A grad u_bar) explicitly
      const SpectralVector ubar = solver.bar().apply(u);
      const spectral::TensorField grad_ubar =
          inverse_transform(gradient(ubar));
      const ScalarField a = EddyViscosity::bump(0.5, 1.5).sample(grid, 0.0);
      SpectralTensor eddy(grid);
      std::vector<double> prod(grid->points());
      for (int c = 0; c < 9; ++c) {
        for (std::size_t p = 0; p < prod.size(); ++p)
          prod[p] = a.c[0][p] * grad_ubar.c[c][p];
        grid->forward(prod.data(), eddy.c[c].data());
      }
      solver.bar().apply_in_place(eddy);
      dealias(eddy);
      const SpectralVector div_eddy = divergence(eddy);
      const double lhs = -l2_inner(div_eddy, u);
      CHECK(lhs == doctest::Approx(power).epsilon(1e-10));
    }
  }
}

TEST_CASE("convection is energy neutral to roundoff") {
  // <div(u x u_bar), u> = 0 discretely: band-limited fields make the
  // triple-product grid sums exact and div u_bar = 0 does the rest.
  SolverConfig cfg = small_config();
  Solver solver(cfg, EddyViscosity::zero());
  auto grid = solver.grid();
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SpectralVector u =
        solver.prepare_initial(random_smooth(grid, 1.0, 0.4, 500 + s));
    const SpectralTensor x = solver.compute_X(u, 0.0);
    const SpectralVector divx = divergence(x);
    const double power = l2_inner(divx, u);
    const double scale =
        std::sqrt(l2_norm_sq(divx)) * std::sqrt(l2_norm_sq(u));
    CHECK(std::abs(power) <= 1e-12 * std::max(scale, 1e-30));
  }
}

TEST_CASE("heat decay is exact for the neutral mode") {
  SolverConfig cfg = small_config();
  cfg.horizon = 0.0625;
  cfg.dt = 1.0 / 128.0;
  Solver solver(cfg, EddyViscosity::zero());
  const int mode = 2;
  SpectralVector u = solver.prepare_initial(shear_mode(solver.grid(), 1.0, mode));
  const SpectralVector u0 = u;
  const double k = static_cast<double>(mode);

  for (int s = 0; s < 8; ++s)
    solver.duhamel_step(u, cfg.dt * s);

  const double decay = std::exp(-cfg.nu * k * k * cfg.dt * 8.0);
  SpectralVector expected = u0;
  for (int c = 0; c < 3; ++c)
    for (auto& v : expected.c[c]) v *= decay;
  const double scale = std::sqrt(l2_norm_sq(u0));
  CHECK(spectral_max_diff(u, expected) < 1e-12 * scale);
}

TEST_CASE("zero data stays zero") {
  SolverConfig cfg = small_config();
  Solver solver(cfg, EddyViscosity::bump(0.3, 1.0));
  const Trajectory traj = solver.solve(SpectralVector(solver.grid()));
  CHECK(traj.diag.back().w == 0.0);
  CHECK(traj.diag.back().balance_residual == 0.0);
  for (const auto& row : traj.diag) CHECK(row.v == 0.0);
}

TEST_CASE("within-step fixed point contracts") {
  SolverConfig cfg = small_config();
  cfg.dt = 1.0 / 256.0;
  cfg.horizon = 4.0 * cfg.dt;
  Solver solver(cfg, EddyViscosity::bump(0.1, cfg.box / 8.0));
  const Trajectory traj =
      solver.solve(taylor_green(solver.grid(), 1.0));
  for (const auto& s : traj.steps) {
    CHECK(s.picard_iterations >= 1);
    if (s.contraction_ratio > 0.0) CHECK(s.contraction_ratio < 1.0);
  }
  CHECK(traj.median_contraction() < 0.5);
}

TEST_CASE("full solve bookkeeping") {
  SolverConfig cfg = small_config();
  cfg.horizon = 0.125;
  cfg.hm_every = 4;
  cfg.hm_max = 2;
  cfg.snapshot_times = {0.0625, 0.125};
  Solver solver(cfg, EddyViscosity::bump(0.1, cfg.box / 8.0));
  const Trajectory traj = solver.solve(taylor_green(solver.grid(), 1.0));

  SUBCASE("rows, snapshots, monotone energy") {
    CHECK(traj.diag.size() == 17);
    CHECK(traj.snapshots.size() == 2);
    CHECK(traj.energy_monotone());
    CHECK(traj.w_eps0 <= traj.w_raw0 * (1.0 + 1e-14));
  }

  SUBCASE("velocity stays divergence-free") {
    CHECK(traj.max_divergence < 1e-9 * std::sqrt(traj.w_raw0));
  }

  SUBCASE("balance residual small and recomputable") {
    CHECK(traj.max_abs_balance_residual() < 1e-5 * traj.w_eps0);
    const auto r = energy_balance_residual(traj);
    CHECK(r.size() == traj.diag.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      CHECK(r[i] == doctest::Approx(traj.diag[i].balance_residual)
                        .epsilon(1e-12));
  }

  SUBCASE("eddy power is nonnegative along the run") {
    for (const auto& row : traj.diag) CHECK(row.k_a_eps >= 0.0);
  }
}

TEST_CASE("single-mode heat decay matches the full trajectory oracle") {
  SolverConfig cfg = small_config();
  cfg.horizon = 0.25;
  cfg.hm_every = 8;
  cfg.hm_max = 3;
  Solver solver(cfg, EddyViscosity::zero());
  const int mode = 3;
  const SpectralVector raw = shear_mode(solver.grid(), 0.9, mode);
  const Trajectory traj = solver.solve(raw);

  // compare W(t) against the exact exponential of the mollified datum
  const double k = static_cast<double>(mode);
  for (std::size_t i = 0; i < traj.diag.size(); ++i) {
    const double expect =
        traj.w_eps0 * std::exp(-2.0 * cfg.nu * k * k * traj.diag[i].t);
    CHECK(traj.diag[i].w == doctest::Approx(expect).epsilon(1e-10));
  }
  // H^m rows: ||u||_{m,2} = sqrt(W) sum_j k^j, V_m = sup|u| k^m
  for (const auto& row : traj.hm) {
    double series = 0.0;
    for (int j = 0; j <= row.m; ++j) series += std::pow(k, j);
    const double w_at =
        traj.w_eps0 * std::exp(-2.0 * cfg.nu * k * k * row.t);
    CHECK(row.hm_norm ==
          doctest::Approx(std::sqrt(w_at) * series).epsilon(1e-9));
  }
}

TEST_CASE("pressure recovery") {
  SolverConfig cfg = small_config();

  SUBCASE("neutral mode has zero pressure") {
    Solver solver(cfg, EddyViscosity::zero());
    const SpectralVector u = shear_mode(solver.grid(), 1.0, 2);
    const SpectralScalar p = solver.pressure_field(u, 0.0);
    double worst = 0.0;
    for (const auto& v : p.c[0]) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-10);
  }

  SUBCASE("zero velocity gives zero pressure") {
    Solver solver(cfg, EddyViscosity::zero());
    const SpectralScalar p =
        solver.pressure_field(SpectralVector(solver.grid()), 0.0);
    for (const auto& v : p.c[0]) CHECK(std::abs(v) == 0.0);
  }

  SUBCASE("Poisson equation and momentum-residual sign oracle") {
    Solver solver(cfg, EddyViscosity::bump(0.2, 1.2));
    auto grid = solver.grid();
    const SpectralVector u =
        solver.prepare_initial(random_smooth(grid, 1.0, 0.4, 77));
    const SpectralTensor x = solver.compute_X(u, 0.0);
    const SpectralScalar p = solver.pressure_field(u, 0.0);

    // laplacian p - div div(-X) = 0 mode by mode
    double worst = 0.0, scale = 0.0;
    for_each_mode(*grid, [&](std::size_t i, double kx, double ky, double kz,
                             double) {
      const double k2 = kx * kx + ky * ky + kz * kz;
      if (k2 == 0.0) return;
      const double k[3] = {kx, ky, kz};
      std::complex<double> divdiv{0.0, 0.0};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          divdiv += -k[a] * k[b] * (-x.c[3 * a + b][i]);
      const std::complex<double> res = -k2 * p.c[0][i] - divdiv;
      worst = std::max(worst, std::abs(res));
      scale = std::max(scale, std::abs(divdiv));
    });
    CHECK(worst <= 1e-10 * scale);

    // with the implemented sign, div X + grad p equals its own Leray
    // projection: the pressure cancels the gradient part exactly
    SpectralVector divx = divergence(x);
    const SpectralVector gp = gradient(p);
    SpectralVector total = divx;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < total.points(); ++i)
        total.c[c][i] += gp.c[c][i];
    SpectralVector projected = total;
    leray_project(projected);
    CHECK(spectral_max_diff(total, projected) <
          1e-10 * std::sqrt(l2_norm_sq(divx)));
  }
}

TEST_CASE("self-convergence at second order") {
  // Taylor-Green with eddy viscosity: halving dt must shrink the
  // time-discretization error by about four.
  auto err_at = [&](double dt) {
    SolverConfig cfg = small_config();
    cfg.n = 16;
    cfg.eps = 4.0 * cfg.spacing();
    cfg.nu = 0.2;
    cfg.horizon = 0.25;
    cfg.dt = dt;
    Solver solver(cfg, EddyViscosity::bump(0.2, cfg.box / 6.0));
    SpectralVector u =
        solver.prepare_initial(taylor_green(solver.grid(), 1.0));
    const auto steps = static_cast<std::size_t>(std::llround(0.25 / dt));
    for (std::size_t s = 0; s < steps; ++s)
      solver.duhamel_step(u, dt * static_cast<double>(s));
    return u;
  };
  const SpectralVector a = err_at(1.0 / 64.0);
  const SpectralVector b = err_at(1.0 / 128.0);
  const SpectralVector c = err_at(1.0 / 256.0);
  SpectralVector d1 = a, d2 = b;
  for (int comp = 0; comp < 3; ++comp)
    for (std::size_t i = 0; i < d1.points(); ++i) {
      d1.c[comp][i] -= b.c[comp][i];
      d2.c[comp][i] -= c.c[comp][i];
    }
  const double e1 = std::sqrt(l2_norm_sq(d1));
  const double e2 = std::sqrt(l2_norm_sq(d2));
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.5);
}

TEST_CASE("configuration guards") {
  SUBCASE("dt guard rejects oversized steps") {
    SolverConfig cfg = small_config();
    cfg.dt = 0.25;
    cfg.horizon = 0.5;
    Solver solver(cfg, EddyViscosity::zero());
    CHECK_THROWS_AS(solver.solve(taylor_green(solver.grid(), 4.0)),
                    evns::invalid_input);
  }

  SUBCASE("snapshot times must sit on the step grid") {
    SolverConfig cfg = small_config();
    cfg.snapshot_times = {0.01};  // not a multiple of 1/128
    Solver solver(cfg, EddyViscosity::zero());
    CHECK_THROWS_AS(solver.solve(shear_mode(solver.grid(), 1.0, 2)),
                    evns::invalid_input);
  }

  SUBCASE("eps below the resolution guard is rejected") {
    SolverConfig cfg = small_config();
    cfg.eps = cfg.spacing();
    CHECK_THROWS_AS(Solver(cfg, EddyViscosity::zero()), evns::invalid_input);
  }
}

TEST_CASE("eps sweep bookkeeping") {
  SweepConfig sweep;
  sweep.base = small_config();
  sweep.base.horizon = 0.0625;
  sweep.base.dt = 1.0 / 128.0;
  const double h = sweep.base.spacing();
  sweep.eps_list = {8.0 * h, 4.0 * h};
  sweep.sample_times = {0.03125, 0.0625};
  const SweepReport rep = eps_sweep(
      sweep, EddyViscosity::zero(), [](std::shared_ptr<const Grid3> g) {
        return taylor_green(g, 1.0);
      });
  CHECK(rep.members.size() == 2);
  CHECK(rep.pairwise.size() == 1);
  CHECK(rep.pairwise[0].size() == 2);
  for (double w0 : rep.w_eps0) CHECK(w0 <= rep.w_raw0 * (1.0 + 1e-14));
  for (double d : rep.pairwise[0]) CHECK(d > 0.0);
  CHECK(rep.limit_inequality_residual < 1e-6 * rep.w_raw0);

  SweepConfig bad = sweep;
  bad.eps_list = {4.0 * h, 8.0 * h};
  CHECK_THROWS_AS(eps_sweep(bad, EddyViscosity::zero(),
                            [](std::shared_ptr<const Grid3> g) {
                              return taylor_green(g, 1.0);
                            }),
                  evns::invalid_input);
}

TEST_CASE("sweep isolates member failures") {
  SweepConfig sweep;
  sweep.base = small_config();
  sweep.base.horizon = 0.03125;
  sweep.base.dt = 1.0 / 128.0;
  const double h = sweep.base.spacing();
  // middle member violates the resolution guard and must fail alone
  sweep.eps_list = {8.0 * h, 1.0 * h, 0.5 * h};
  sweep.sample_times = {0.03125};
  const SweepReport rep = eps_sweep(
      sweep, EddyViscosity::zero(), [](std::shared_ptr<const Grid3> g) {
        return taylor_green(g, 1.0);
      });
  CHECK_FALSE(rep.all_members_ok());
  CHECK(rep.member_errors[0].empty());
  CHECK_FALSE(rep.member_errors[1].empty());
  CHECK(std::isnan(rep.pairwise[0][0]));
  // first member still ran to completion
  CHECK(rep.members[0].diag.size() == 5);
}

TEST_CASE("normalized H^m monitor stays bounded as eps halves") {
  // ||u(t)||_{m,2} eps^m / sqrt(W(0)) and V_m eps^{m+3/2} / sqrt(W(0))
  // must not grow when eps halves (the estimates carry eps^{-m} and
  // eps^{-(m+3/2)}); on smooth data they typically shrink.
  const double slack = 1.3;
  std::vector<std::vector<double>> hm_by_eps, vm_by_eps;
  for (double f : {16.0, 8.0, 4.0}) {
    SolverConfig cfg = small_config();
    cfg.horizon = 0.0625;
    cfg.eps = f * cfg.spacing();
    cfg.hm_every = 2;
    cfg.hm_max = 2;
    Solver solver(cfg, EddyViscosity::bump(0.1, cfg.box / 8.0));
    const Trajectory traj = solver.solve(taylor_green(solver.grid(), 1.0));
    std::vector<double> hm(3, 0.0), vm(3, 0.0);
    for (const auto& row : traj.hm) {
      const double rw = std::sqrt(traj.w_eps0);
      hm[row.m] = std::max(hm[row.m],
                           row.hm_norm * std::pow(cfg.eps, row.m) / rw);
      vm[row.m] = std::max(
          vm[row.m], row.vm * std::pow(cfg.eps, row.m + 1.5) / rw);
    }
    hm_by_eps.push_back(hm);
    vm_by_eps.push_back(vm);
  }
  for (int m = 0; m <= 2; ++m) {
    for (std::size_t e = 1; e < hm_by_eps.size(); ++e) {
      CHECK(std::isfinite(hm_by_eps[e][m]));
      CHECK(hm_by_eps[e][m] <= slack * hm_by_eps[e - 1][m]);
      CHECK(vm_by_eps[e][m] <= slack * vm_by_eps[e - 1][m]);
    }
  }
}

TEST_CASE("tail report on compactly supported data") {
  SolverConfig cfg = small_config();
  cfg.nu = 0.05;
  cfg.horizon = 0.125;
  Solver solver(cfg, EddyViscosity::bump(0.1, 0.8));
  const Trajectory traj =
      solver.solve(localized_vortex(solver.grid(), 1.0, 1.2));
  const TailReport rep = tail_report(traj);
  CHECK(rep.times.size() == traj.diag.size());
  CHECK(rep.max_tail <= 1e-6 * traj.w_eps0);
  const double gap = traj.config.tail_r2 - traj.config.tail_r1;
  for (double tval : rep.tail)
    CHECK(tval <= rep.initial_tail_r1 + rep.fitted_c / gap + 1e-15);
}
