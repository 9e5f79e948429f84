#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <evns.h>

#include <cmath>
#include <cstring>
#include <vector>

TEST_CASE("oseen surface") {
  double g = 0.0;
  CHECK(evns_oseen_potential(1.0, 1.0, (const double[3]){0, 0, 0}, &g) ==
        EVNS_OK);
  CHECK(g == doctest::Approx(1.0));

  CHECK(evns_oseen_potential(1.0, -1.0, (const double[3]){0, 0, 0}, &g) ==
        EVNS_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(evns_last_error()) > 0);

  double tensor[9];
  CHECK(evns_oseen_tensor(0.5, 0.7, (const double[3]){0.4, -0.2, 0.9},
                          tensor) == EVNS_OK);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(tensor[3 * i + j] == tensor[3 * j + i]);

  double q = 0.0;
  CHECK(evns_heat_kernel(0.25, 0.8, (const double[3]){0, 0, 0}, &q) == EVNS_OK);
  CHECK(q == doctest::Approx(std::pow(4.0 * M_PI * 0.25 * 0.8, -1.5)));

  double c0 = 0.0, tail = 0.0;
  CHECK(evns_oseen_constant_scan(1.0, 0, 1.0, 12.0, 200, &c0, &tail) ==
        EVNS_OK);
  CHECK(c0 > 0.0);
  CHECK(tail == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(0.01));

  double value = 0.0, law = 0.0;
  CHECK(evns_oseen_grad_tensor_l1(1.0, 0.5, &value, &law) == EVNS_OK);
  CHECK(law == doctest::Approx(value * std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("volterra surface") {
  evns_status st = EVNS_OK;
  evns_volterra* v = evns_volterra_create(
      1.0, 0.25, 256, EVNS_KERNEL_CONSTANT, 1.0, 1.0, nullptr, EVNS_P_SQUARE,
      0.0, 0.0, nullptr, nullptr, 0.0, 0, &st);
  REQUIRE(v != nullptr);
  REQUIRE(st == EVNS_OK);
  const size_t n = evns_volterra_nodes(v);
  CHECK(n == 257);

  std::vector<double> start(n, 2.0), out(n, 0.0);
  int ok = 0;
  CHECK(evns_volterra_is_supersolution(v, start.data(), &ok) == EVNS_OK);
  CHECK(ok == 1);

  int iters = 0;
  double residual = 0.0;
  CHECK(evns_volterra_picard(v, start.data(), 1, 300, 1e-12, out.data(),
                             &iters, &residual) == EVNS_OK);
  CHECK(out.back() == doctest::Approx(4.0 / 3.0).epsilon(1e-4));
  CHECK(residual < 1e-10);

  std::vector<double> zero(n, 0.0);
  int holds = 0;
  CHECK(evns_volterra_vmax(v, zero.data(), start.data(), &holds) == EVNS_OK);
  CHECK(holds == 1);

  // invalid supersolution surfaces as an argument error, not a result
  std::vector<double> bad(n, 1.01);
  CHECK(evns_volterra_vmax(v, zero.data(), bad.data(), &holds) ==
        EVNS_ERR_INVALID_ARGUMENT);

  double tau = 0.0;
  CHECK(evns_volterra_constant_barrier_horizon(v, 2.0, &tau) == EVNS_OK);
  CHECK(tau == doctest::Approx(0.25));
  evns_volterra_destroy(v);

  // custom callback nonlinearity
  auto rule = [](double z, void*) -> double { return 0.5 * z + 1.0; };
  evns_volterra* lin = evns_volterra_create(
      0.5, 1.0, 128, EVNS_KERNEL_INVERSE_SQRT, 1.0, 1.0, nullptr,
      EVNS_P_CUSTOM, 0.0, 0.0, rule, nullptr, 0.5, 1, &st);
  REQUIRE(lin != nullptr);
  std::vector<double> f(evns_volterra_nodes(lin), 0.5);
  std::vector<double> sf(f.size(), 0.0);
  CHECK(evns_volterra_apply_s(lin, f.data(), sf.data()) == EVNS_OK);
  // S = 0.5 + P(0.5) * 2 sqrt(t) with P(0.5) = 1.25
  CHECK(sf.back() == doctest::Approx(0.5 + 1.25 * 2.0).epsilon(1e-12));
  evns_volterra_destroy(lin);

  double blow[5] = {1.0, 2.0, 50.0, 1e9, 3.0};
  ptrdiff_t idx = 0;
  CHECK(evns_volterra_detect_blowup(blow, 5, 100.0, &idx) == EVNS_OK);
  CHECK(idx == 3);
  CHECK(evns_volterra_detect_blowup(blow, 0, 100.0, &idx) == EVNS_OK);
  CHECK(idx == -1);
}

TEST_CASE("solver run surface") {
  const char* cfg =
      "nu = 0.1\n"
      "eps = 8h\n"
      "N = 32\n"
      "L = 6.283185307179586\n"
      "T = 0.0625\n"
      "dt = 0.0078125\n"
      "u0_kind = shear_mode\n"
      "u0_mode = 2\n"
      "u0_amplitude = 1.0\n";
  evns_status st = EVNS_OK;
  evns_run* run = evns_run_config_text(cfg, &st);
  REQUIRE(run != nullptr);
  REQUIRE(st == EVNS_OK);

  CHECK(evns_run_rows(run) == 9);
  double row[7];
  CHECK(evns_run_diagnostics(run, 0, row) == EVNS_OK);
  CHECK(row[0] == 0.0);
  CHECK(row[1] > 0.0);
  CHECK(evns_run_diagnostics(run, 8, row) == EVNS_OK);
  CHECK(row[0] == doctest::Approx(0.0625));

  double w0 = 0, weps = 0, med = 0, div = 0;
  CHECK(evns_run_scalars(run, &w0, &weps, &med, &div) == EVNS_OK);
  CHECK(weps <= w0);
  CHECK(div < 1e-9);

  CHECK(evns_run_write_outputs(run, "/tmp/evns_capi_out") == EVNS_OK);
  evns_run_destroy(run);

  evns_run* bad = evns_run_config_text("nu = -1\nu0_kind = taylor_green\n",
                                       &st);
  CHECK(bad == nullptr);
  CHECK(st == EVNS_ERR_INVALID_ARGUMENT);
}
