#include "evns.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "evns/checks.hpp"
#include "evns/config.hpp"
#include "evns/io.hpp"
#include "evns/oseen.hpp"
#include "evns/solver.hpp"
#include "evns/volterra.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename F>
evns_status guarded(F&& f) {
  try {
    f();
    return EVNS_OK;
  } catch (const evns::invalid_input& e) {
    set_error(e.what());
    return EVNS_ERR_INVALID_ARGUMENT;
  } catch (const evns::no_convergence& e) {
    set_error(e.what());
    return EVNS_ERR_NO_CONVERGENCE;
  } catch (const std::exception& e) {
    set_error(e.what());
    return EVNS_ERR_INTERNAL;
  }
}

evns::oseen::Vec3 to_vec(const double x[3]) { return {x[0], x[1], x[2]}; }

}  // namespace

struct evns_volterra {
  evns::volterra::Problem problem;
};

struct evns_run {
  evns::config::RunSpec spec;
  evns::solver::Trajectory trajectory;
};

extern "C" {

const char* evns_status_name(evns_status s) {
  switch (s) {
    case EVNS_OK: return "ok";
    case EVNS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case EVNS_ERR_NO_CONVERGENCE: return "no convergence";
    case EVNS_ERR_IO: return "io error";
    case EVNS_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* evns_last_error(void) { return g_last_error.c_str(); }

evns_status evns_oseen_potential(double nu, double t, const double x[3],
                                 double* out) {
  return guarded([&] {
    *out = evns::oseen::Evaluator(nu).potential(t, to_vec(x));
  });
}

evns_status evns_oseen_gradient(double nu, double t, const double x[3],
                                double out[3]) {
  return guarded([&] {
    const auto g = evns::oseen::Evaluator(nu).potential_gradient(t, to_vec(x));
    std::memcpy(out, g.data(), sizeof(double) * 3);
  });
}

evns_status evns_oseen_hessian(double nu, double t, const double x[3],
                               double out[9]) {
  return guarded([&] {
    const auto h = evns::oseen::Evaluator(nu).potential_hessian(t, to_vec(x));
    std::memcpy(out, h.data(), sizeof(double) * 9);
  });
}

evns_status evns_oseen_tensor(double nu, double t, const double x[3],
                              double out[9]) {
  return guarded([&] {
    const auto m = evns::oseen::Evaluator(nu).tensor(t, to_vec(x));
    std::memcpy(out, m.data(), sizeof(double) * 9);
  });
}

evns_status evns_heat_kernel(double nu, double t, const double x[3],
                             double* out) {
  return guarded([&] {
    *out = evns::oseen::Evaluator(nu).heat_kernel(t, to_vec(x));
  });
}

evns_status evns_oseen_constant_scan(double nu, int m, double t, double y_max,
                                     int samples, double* out_constant,
                                     double* out_tail) {
  return guarded([&] {
    evns::oseen::ScanSpec spec;
    spec.t = t;
    spec.y_max = y_max;
    spec.samples = samples;
    const auto r =
        evns::oseen::estimate_constant(evns::oseen::Evaluator(nu), m, spec);
    if (out_constant) *out_constant = r.constant;
    if (out_tail) *out_tail = r.tail_value;
  });
}

evns_status evns_oseen_grad_tensor_l1(double nu, double t, double* out_value,
                                      double* out_law_constant) {
  return guarded([&] {
    const auto r =
        evns::oseen::grad_tensor_l1_norm(evns::oseen::Evaluator(nu), t);
    if (out_value) *out_value = r.value;
    if (out_law_constant) *out_law_constant = r.law_constant;
  });
}

evns_volterra* evns_volterra_create(
    double offset, double horizon, size_t intervals,
    evns_kernel_kind kernel_kind, double kernel_coeff, double kernel_nu,
    const double* kernel_samples, evns_p_kind p_kind, double p_alpha1,
    double p_alpha2, evns_p_fn p_fn, void* p_ctx, double p_lipschitz,
    int p_monotone, evns_status* status) {
  evns_volterra* handle = nullptr;
  const evns_status st = guarded([&] {
    using namespace evns::volterra;
    Problem p;
    p.offset = offset;
    p.horizon = horizon;
    p.intervals = intervals;
    switch (kernel_kind) {
      case EVNS_KERNEL_CONSTANT:
        p.kernel = Kernel::constant(kernel_coeff);
        break;
      case EVNS_KERNEL_INVERSE_SQRT:
        p.kernel = Kernel::inverse_sqrt(kernel_coeff, kernel_nu);
        break;
      case EVNS_KERNEL_TABULATED: {
        evns::require(kernel_samples != nullptr,
                      "tabulated kernel needs samples");
        p.kernel = Kernel::tabulated(std::vector<double>(
            kernel_samples, kernel_samples + intervals + 1));
        break;
      }
      default:
        throw evns::invalid_input("unknown kernel kind");
    }
    switch (p_kind) {
      case EVNS_P_LINEAR:
        p.nonlinearity = Nonlinearity::linear(p_alpha1, p_alpha2);
        break;
      case EVNS_P_SQUARE:
        p.nonlinearity = Nonlinearity::square();
        break;
      case EVNS_P_SQRT:
        p.nonlinearity = Nonlinearity::sqrt_clamped();
        break;
      case EVNS_P_CUSTOM: {
        evns::require(p_fn != nullptr, "custom nonlinearity needs a callback");
        auto fn = [p_fn, p_ctx](double z) { return p_fn(z, p_ctx); };
        p.nonlinearity = Nonlinearity::custom(fn, p_lipschitz,
                                              p_monotone != 0, "custom");
        break;
      }
      default:
        throw evns::invalid_input("unknown nonlinearity kind");
    }
    p.validate();
    handle = new evns_volterra{std::move(p)};
  });
  if (status) *status = st;
  return handle;
}

void evns_volterra_destroy(evns_volterra* v) { delete v; }

size_t evns_volterra_nodes(const evns_volterra* v) {
  return v->problem.intervals + 1;
}

namespace {
evns::volterra::GridFunction wrap_grid(const evns_volterra* v,
                                       const double* f) {
  evns::volterra::GridFunction g;
  g.horizon = v->problem.horizon;
  g.values.assign(f, f + v->problem.intervals + 1);
  return g;
}
}  // namespace

evns_status evns_volterra_apply_s(const evns_volterra* v, const double* f,
                                  double* out) {
  return guarded([&] {
    const auto r = evns::volterra::apply_S(v->problem, wrap_grid(v, f));
    std::memcpy(out, r.values.data(), sizeof(double) * r.values.size());
  });
}

evns_status evns_volterra_picard(const evns_volterra* v, const double* start,
                                 int from_supersolution, int max_iter,
                                 double tol, double* out, int* iterations,
                                 double* residual) {
  return guarded([&] {
    const auto r = evns::volterra::picard_from(
        v->problem, wrap_grid(v, start),
        from_supersolution ? evns::volterra::StartSide::supersolution
                           : evns::volterra::StartSide::subsolution,
        max_iter, tol);
    if (!r.converged)
      throw evns::no_convergence("iteration did not converge in " +
                                 std::to_string(max_iter) + " steps");
    std::memcpy(out, r.f.values.data(), sizeof(double) * r.f.values.size());
    if (iterations) *iterations = r.iterations;
    if (residual) *residual = r.residual;
  });
}

evns_status evns_volterra_is_subsolution(const evns_volterra* v,
                                         const double* f, int* out) {
  return guarded([&] {
    *out = evns::volterra::check_subsolution(v->problem, wrap_grid(v, f)) ? 1
                                                                          : 0;
  });
}

evns_status evns_volterra_is_supersolution(const evns_volterra* v,
                                           const double* g, int* out) {
  return guarded([&] {
    *out =
        evns::volterra::check_supersolution(v->problem, wrap_grid(v, g)) ? 1
                                                                         : 0;
  });
}

evns_status evns_volterra_vmax(const evns_volterra* v, const double* f_sub,
                               const double* g_super, int* out_holds) {
  return guarded([&] {
    using evns::volterra::VmaxStatus;
    const auto st = evns::volterra::vmax_check(
        v->problem, wrap_grid(v, f_sub), wrap_grid(v, g_super));
    switch (st) {
      case VmaxStatus::holds: *out_holds = 1; return;
      case VmaxStatus::comparison_failed: *out_holds = 0; return;
      case VmaxStatus::invalid_subsolution:
        throw evns::invalid_input("f_sub is not a verified subsolution");
      case VmaxStatus::invalid_supersolution:
        throw evns::invalid_input("g_super is not a verified supersolution");
      case VmaxStatus::invalid_nonlinearity:
        throw evns::invalid_input(
            "nonlinearity is not monotone Lipschitz as declared");
    }
  });
}

evns_status evns_volterra_constant_barrier_horizon(const evns_volterra* v,
                                                   double barrier,
                                                   double* out_tau) {
  return guarded([&] {
    *out_tau =
        evns::volterra::constant_supersolution_horizon(v->problem, barrier);
  });
}

evns_status evns_volterra_detect_blowup(const double* f, size_t count,
                                        double threshold,
                                        ptrdiff_t* out_index) {
  return guarded([&] {
    evns::volterra::GridFunction g;
    g.horizon = 1.0;
    g.values.assign(f, f + count);
    if (count == 0) {
      *out_index = -1;
      return;
    }
    const auto idx = evns::volterra::detect_blowup(g, threshold);
    *out_index = idx ? static_cast<ptrdiff_t>(*idx) : -1;
  });
}

evns_run* evns_run_config_text(const char* text, evns_status* status) {
  evns_run* handle = nullptr;
  const evns_status st = guarded([&] {
    auto spec = evns::config::parse_config_text(text);
    spec.validate_for_run();
    evns::solver::Solver s(spec.solver, spec.eddy());
    auto traj = s.solve(spec.build_u0(s.grid()));
    handle = new evns_run{std::move(spec), std::move(traj)};
  });
  if (status) *status = st;
  return handle;
}

evns_run* evns_run_config_file(const char* path, evns_status* status) {
  evns_run* handle = nullptr;
  const evns_status st = guarded([&] {
    auto spec = evns::config::parse_config_file(path);
    spec.validate_for_run();
    evns::solver::Solver s(spec.solver, spec.eddy());
    auto traj = s.solve(spec.build_u0(s.grid()));
    handle = new evns_run{std::move(spec), std::move(traj)};
  });
  if (status) *status = st;
  return handle;
}

void evns_run_destroy(evns_run* r) { delete r; }

size_t evns_run_rows(const evns_run* r) { return r->trajectory.diag.size(); }

evns_status evns_run_diagnostics(const evns_run* r, size_t row,
                                 double out[7]) {
  return guarded([&] {
    evns::require(row < r->trajectory.diag.size(), "diagnostics row out of range");
    const auto& d = r->trajectory.diag[row];
    out[0] = d.t;
    out[1] = d.w;
    out[2] = d.j;
    out[3] = d.k_a_eps;
    out[4] = d.v;
    out[5] = d.balance_residual;
    out[6] = d.tail_r2;
  });
}

evns_status evns_run_scalars(const evns_run* r, double* w_raw0, double* w_eps0,
                             double* median_contraction,
                             double* max_divergence) {
  return guarded([&] {
    if (w_raw0) *w_raw0 = r->trajectory.w_raw0;
    if (w_eps0) *w_eps0 = r->trajectory.w_eps0;
    if (median_contraction)
      *median_contraction = r->trajectory.median_contraction();
    if (max_divergence) *max_divergence = r->trajectory.max_divergence;
  });
}

evns_status evns_run_write_outputs(const evns_run* r, const char* out_dir) {
  return guarded([&] {
    evns::require(out_dir != nullptr && out_dir[0] != '\0',
                  "output directory required");
    evns::io::ensure_dir(out_dir);
    const std::string dir(out_dir);
    evns::io::write_diagnostics_csv(dir + "/diagnostics.csv", r->trajectory);
    if (r->spec.solver.hm_every > 0)
      evns::io::write_hm_csv(dir + "/hm.csv", r->trajectory);
    for (const auto& [t, field] : r->trajectory.snapshots)
      evns::io::write_field(dir + "/u_t" + evns::io::format_double(t) + ".fld",
                            field);
  });
}

int evns_command(const char* command, const char* config_path,
                 const char* out_dir, uint64_t seed, int quiet) {
  const std::string cmd = command ? command : "";
  const std::string out = out_dir ? out_dir : "";
  try {
    evns::config::RunSpec spec;
    const bool needs_config = cmd == "nse-run" || cmd == "nse-sweep";
    if (needs_config) {
      if (!config_path || config_path[0] == '\0') {
        std::fprintf(stderr, "evns: %s requires --config\n", cmd.c_str());
        return 2;
      }
      spec = evns::config::parse_config_file(config_path);
      if (seed != UINT64_MAX) spec.seed = seed;
    }
    const uint64_t effective_seed = seed == UINT64_MAX ? 1 : seed;
    const std::string target =
        !out.empty() ? out : (!spec.out_dir.empty() ? spec.out_dir : "evns_out");

    evns::checks::Suite suite;
    if (cmd == "volterra-demo")
      suite = evns::checks::volterra_demo_suite(target, effective_seed);
    else if (cmd == "oseen-verify")
      suite = evns::checks::oseen_verify_suite(target, effective_seed);
    else if (cmd == "mollifier-verify")
      suite = evns::checks::mollifier_verify_suite(target, effective_seed);
    else if (cmd == "nse-run")
      suite = evns::checks::nse_run_suite(spec, target);
    else if (cmd == "nse-sweep")
      suite = evns::checks::nse_sweep_suite(spec, target);
    else if (cmd == "all-checks")
      suite = evns::checks::all_checks_suite(target, effective_seed);
    else {
      std::fprintf(stderr, "evns: unknown command '%s'\n", cmd.c_str());
      return 2;
    }

    if (!quiet) {
      for (const auto& c : suite.checks)
        std::printf("[%s] %-24s %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.detail.c_str());
      std::printf("%s: %s\n", suite.name.c_str(),
                  suite.pass() ? "all checks passed" : "CHECKS FAILED");
    }
    return suite.pass() ? 0 : 1;
  } catch (const evns::invalid_input& e) {
    std::fprintf(stderr, "evns: %s\n", e.what());
    return 2;
  } catch (const evns::no_convergence& e) {
    std::fprintf(stderr, "evns: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "evns: %s\n", e.what());
    return 2;
  }
}

}  // extern "C"
