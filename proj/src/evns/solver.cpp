#include "evns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evns/spectral_ops.hpp"

namespace evns::solver {

namespace {
using spectral::dealias;
using spectral::divergence;
using spectral::for_each_mode;
using spectral::gradient;
using spectral::inverse_transform;
using spectral::l2_norm_sq;
using spectral::leray_project;
using spectral::transform;

/// ETD trapezoid weights: with z = nu |k|^2 dt,
///   u <- e^{-z} u + dt (w0 F(t) + w1 F(t+dt)),
///   w0 = int_0^1 tau e^{-z tau} dtau,  w1 = int_0^1 (1-tau) e^{-z tau} dtau.
/// Exact for the linear part, second order in the forcing.
void etd_weights(double z, double& w0, double& w1) {
  double ia, ib;
  if (z < 0.1) {
    ia = 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0 +
         z * z * z * z / 120.0 - z * z * z * z * z / 720.0 +
         z * z * z * z * z * z / 5040.0;
    ib = 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0 +
         z * z * z * z / 144.0 - z * z * z * z * z / 840.0 +
         z * z * z * z * z * z / 5760.0;
  } else {
    ia = -std::expm1(-z) / z;
    ib = (1.0 - std::exp(-z) * (1.0 + z)) / (z * z);
  }
  w0 = ib;
  w1 = ia - ib;
}

double l2_distance(const SpectralVector& a, const SpectralVector& b) {
  SpectralVector d = a;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < d.points(); ++i) d.c[c][i] -= b.c[c][i];
  return std::sqrt(l2_norm_sq(d));
}

}  // namespace

void SolverConfig::validate() const {
  require(nu > 0.0, "viscosity must be positive");
  require(n >= 16, "solver grids start at N = 16");
  require(box > 0.0 && horizon > 0.0 && dt > 0.0, "box, T, dt must be positive");
  require(eps >= 2.0 * spacing(), "eps below the resolution guard (eps >= 2h)");
  require(picard_tol > 0.0 && picard_max >= 1, "bad fixed-point settings");
  const double steps = horizon / dt;
  require(std::abs(steps - std::round(steps)) < 1e-9,
          "horizon must be an integer number of steps");
}

double Trajectory::median_contraction() const {
  std::vector<double> r;
  for (const auto& s : steps)
    if (s.contraction_ratio > 0.0) r.push_back(s.contraction_ratio);
  if (r.empty()) return 0.0;
  std::sort(r.begin(), r.end());
  return r[r.size() / 2];
}

double Trajectory::max_abs_balance_residual() const {
  double worst = 0.0;
  for (const auto& row : diag)
    worst = std::max(worst, std::abs(row.balance_residual));
  return worst;
}

bool Trajectory::energy_monotone() const {
  for (std::size_t i = 1; i < diag.size(); ++i)
    if (diag[i].w > diag[i - 1].w) return false;
  return true;
}

Solver::Solver(SolverConfig cfg, EddyViscosity a,
               std::shared_ptr<const Grid3> grid)
    : cfg_(std::move(cfg)), a_(std::move(a)) {
  cfg_.validate();
  if (cfg_.tail_r1 < 0.0) cfg_.tail_r1 = 0.25 * cfg_.box;
  if (cfg_.tail_r2 < 0.0) cfg_.tail_r2 = 0.375 * cfg_.box;
  require(cfg_.tail_r1 < cfg_.tail_r2 && cfg_.tail_r2 < 0.5 * cfg_.box,
          "tail radii need R1 < R2 < L/2");
  if (grid) {
    require(grid->n() == cfg_.n && grid->box() == cfg_.box,
            "provided grid does not match the configuration");
    grid_ = std::move(grid);
  } else {
    grid_ = Grid3::make(cfg_.n, cfg_.box);
  }
  bar_ = std::make_unique<mollifier::BarOperator>(grid_, cfg_.eps);

  decay_.resize(grid_->spectral_points());
  w0_.resize(grid_->spectral_points());
  w1_.resize(grid_->spectral_points());
  for_each_mode(*grid_, [&](std::size_t i, double kx, double ky, double kz,
                            double) {
    const double z = cfg_.nu * (kx * kx + ky * ky + kz * kz) * cfg_.dt;
    decay_[i] = std::exp(-z);
    etd_weights(z, w0_[i], w1_[i]);
  });
}

const ScalarField& Solver::a_field(double t) const {
  if (!a_cache_ || (!a_.time_constant && a_cache_t_ != t)) {
    a_cache_ = a_.sample(grid_, t);
    a_cache_t_ = t;
  }
  return *a_cache_;
}

SpectralTensor Solver::compute_X(const SpectralVector& u_hat, double t) const {
  const SpectralVector ubar_hat = bar_->apply(u_hat);
  const VectorField u = inverse_transform(u_hat);
  const VectorField ubar = inverse_transform(ubar_hat);

  SpectralTensor x(grid_);
  std::vector<double> prod(grid_->points());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (std::size_t p = 0; p < prod.size(); ++p)
        prod[p] = u.c[i][p] * ubar.c[j][p];
      grid_->forward(prod.data(), x.c[3 * i + j].data());
    }
  }

  if (!a_.is_zero()) {
    const ScalarField& a = a_field(t);
    const spectral::TensorField grad_ubar =
        inverse_transform(gradient(ubar_hat));
    SpectralTensor eddy(grid_);
    for (int c = 0; c < 9; ++c) {
      for (std::size_t p = 0; p < prod.size(); ++p)
        prod[p] = a.c[0][p] * grad_ubar.c[c][p];
      grid_->forward(prod.data(), eddy.c[c].data());
    }
    bar_->apply_in_place(eddy);
    for (int c = 0; c < 9; ++c)
      for (std::size_t p = 0; p < x.points(); ++p)
        x.c[c][p] -= eddy.c[c][p];
  }

  if (cfg_.dealias) dealias(x);
  return x;
}

SpectralVector Solver::forcing(const SpectralVector& u_hat, double t) const {
  const SpectralTensor x = compute_X(u_hat, t);
  SpectralVector f = divergence(x);
  for (int c = 0; c < 3; ++c)
    for (auto& v : f.c[c]) v = -v;
  leray_project(f);
  return f;
}

StepStats Solver::duhamel_step(SpectralVector& u_hat, double t) const {
  StepStats stats;
  stats.t = t;
  const double dt = cfg_.dt;
  const double scale = std::max(std::sqrt(l2_norm_sq(u_hat)), 1e-30);
  const double tol = cfg_.picard_tol * scale;

  const SpectralVector f0 = forcing(u_hat, t);

  // Predictor freezes the forcing across the step.
  SpectralVector v(grid_);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < v.points(); ++i) {
      v.c[c][i] = decay_[i] * u_hat.c[c][i] +
                  dt * (w0_[i] + w1_[i]) * f0.c[c][i];
    }
  }

  double prev_increment = 0.0;
  bool converged = false;
  for (int p = 0; p < cfg_.picard_max; ++p) {
    const SpectralVector f1 = forcing(v, t + dt);
    SpectralVector next(grid_);
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < next.points(); ++i) {
        next.c[c][i] = decay_[i] * u_hat.c[c][i] +
                       dt * (w0_[i] * f0.c[c][i] + w1_[i] * f1.c[c][i]);
      }
    }
    const double increment = l2_distance(next, v);
    v = std::move(next);
    stats.picard_iterations = p + 1;
    stats.final_increment = increment;
    if (p == 1 && prev_increment > 0.0)
      stats.contraction_ratio = increment / prev_increment;
    if (increment <= tol) {
      converged = true;
      break;
    }
    prev_increment = increment;
  }
  if (!converged) {
    throw no_convergence(
        "within-step fixed point failed at t=" + std::to_string(t) +
        " (last increment " + std::to_string(stats.final_increment) +
        ", contraction ratio " + std::to_string(stats.contraction_ratio) +
        "); reduce dt");
  }
  u_hat = std::move(v);
  return stats;
}

SpectralScalar Solver::pressure_field(const SpectralVector& u_hat,
                                      double t) const {
  const SpectralTensor x = compute_X(u_hat, t);
  SpectralScalar p(grid_);
  for_each_mode(*grid_, [&](std::size_t i, double kx, double ky, double kz,
                            double) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0) {
      p.c[0][i] = {0.0, 0.0};  // zero-mean gauge
      return;
    }
    const double k[3] = {kx, ky, kz};
    std::complex<double> s{0.0, 0.0};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) s += k[a] * k[b] * x.c[3 * a + b][i];
    // Delta p = div div(-X)  =>  p_hat = -k_a k_b X_ab / |k|^2; the sign is
    // pinned by the momentum-residual oracle in the tests.
    p.c[0][i] = -s / k2;
  });
  return p;
}

SpectralVector Solver::prepare_initial(const SpectralVector& u0_raw) const {
  SpectralVector u = bar_->apply(u0_raw);
  leray_project(u);
  if (cfg_.dealias) dealias(u);
  return u;
}

double Solver::eddy_power(const SpectralVector& u_hat, double t) const {
  if (a_.is_zero()) return 0.0;
  const SpectralVector ubar_hat = bar_->apply(u_hat);
  const spectral::TensorField grad_ubar =
      inverse_transform(gradient(ubar_hat));
  return spectral::weighted_grad_energy(a_field(t), grad_ubar);
}

Trajectory Solver::solve(const SpectralVector& u0_raw) const {
  Trajectory traj;
  traj.grid = grid_;
  traj.config = cfg_;
  traj.w_raw0 = l2_norm_sq(u0_raw);

  SpectralVector u = prepare_initial(u0_raw);
  traj.w_eps0 = l2_norm_sq(u);

  const auto steps = static_cast<std::size_t>(std::llround(cfg_.horizon / cfg_.dt));
  for (double ts : cfg_.snapshot_times) {
    const double k = ts / cfg_.dt;
    require(std::abs(k - std::round(k)) < 1e-6 && ts >= 0.0 &&
                ts <= cfg_.horizon + 1e-12,
            "snapshot times must sit on the step grid");
  }

  {
    const VectorField ubar0 = inverse_transform(bar_->apply(u));
    const double sup = spectral::sup_norm(ubar0);
    traj.dt_guard = 0.5 * cfg_.spacing() / std::max(1.0, sup);
    if (cfg_.enforce_dt_guard)
      require(cfg_.dt <= traj.dt_guard + 1e-15,
              "dt " + std::to_string(cfg_.dt) + " exceeds the advection guard " +
                  std::to_string(traj.dt_guard));
  }
  if (!a_.is_zero()) {
    traj.n_a = a_.sup_sample(grid_, 0.0);
    traj.a_grad_sup = a_.grad_sup_estimate(grid_, 0.0);
  }

  KahanSum int_j2, int_k2;  // trapezoid accumulators
  double prev_j2 = 0.0, prev_k2 = 0.0;

  const auto record = [&](std::size_t step_index, const SpectralVector& u_hat) {
    const double t = cfg_.dt * static_cast<double>(step_index);
    DiagRow row;
    row.t = t;
    row.w = l2_norm_sq(u_hat);
    const double j2 = spectral::grad_l2_norm_sq(u_hat);
    row.j = std::sqrt(j2);
    const double k2 = eddy_power(u_hat, t);
    row.k_a_eps = std::sqrt(std::max(0.0, k2));

    const VectorField u_phys = inverse_transform(u_hat);
    row.v = spectral::sup_norm(u_phys);
    row.tail_r2 = spectral::tail_energy(u_phys, cfg_.tail_r2);
    if (!a_.is_zero()) {
      const spectral::TensorField grad_u =
          inverse_transform(gradient(u_hat));
      row.k_a = std::sqrt(std::max(
          0.0, spectral::weighted_grad_energy(a_field(t), grad_u)));
    }

    if (step_index == 0) {
      traj.initial_tail_r1 = spectral::tail_energy(u_phys, cfg_.tail_r1);
    } else {
      int_j2.add(0.5 * cfg_.dt * (prev_j2 + j2));
      int_k2.add(0.5 * cfg_.dt * (prev_k2 + k2));
    }
    prev_j2 = j2;
    prev_k2 = k2;
    row.balance_residual = 0.5 * row.w + cfg_.nu * int_j2.value() +
                           int_k2.value() - 0.5 * traj.w_eps0;
    traj.diag.push_back(row);

    traj.max_divergence =
        std::max(traj.max_divergence, spectral::max_abs_divergence(u_hat));

    if (cfg_.hm_every > 0 && step_index % cfg_.hm_every == 0) {
      for (int m = 0; m <= cfg_.hm_max; ++m) {
        HmRow hr;
        hr.t = t;
        hr.m = m;
        hr.hm_norm = spectral::sobolev_norm(u_hat, m);
        hr.vm = spectral::sup_derivative(u_hat, m);
        traj.hm.push_back(hr);
      }
    }
    for (double ts : cfg_.snapshot_times) {
      if (std::abs(ts - t) < 0.25 * cfg_.dt) {
        traj.snapshots.emplace_back(t, u_phys);
        traj.pressure_snapshots.emplace_back(
            t, inverse_transform(pressure_field(u_hat, t)));
      }
    }
  };

  record(0, u);
  for (std::size_t s = 1; s <= steps; ++s) {
    try {
      traj.steps.push_back(duhamel_step(u, cfg_.dt * (s - 1.0)));
    } catch (const no_convergence& e) {
      throw no_convergence("step to t=" + std::to_string(cfg_.dt * s) + ": " +
                           e.what());
    }
    record(s, u);
  }
  return traj;
}

std::vector<double> energy_balance_residual(const Trajectory& traj) {
  std::vector<double> r;
  r.reserve(traj.diag.size());
  KahanSum ij2, ik2;
  for (std::size_t i = 0; i < traj.diag.size(); ++i) {
    if (i > 0) {
      const double dt = traj.diag[i].t - traj.diag[i - 1].t;
      ij2.add(0.5 * dt *
              (traj.diag[i - 1].j * traj.diag[i - 1].j +
               traj.diag[i].j * traj.diag[i].j));
      ik2.add(0.5 * dt *
              (traj.diag[i - 1].k_a_eps * traj.diag[i - 1].k_a_eps +
               traj.diag[i].k_a_eps * traj.diag[i].k_a_eps));
    }
    r.push_back(0.5 * traj.diag[i].w + traj.config.nu * ij2.value() +
                ik2.value() - 0.5 * traj.w_eps0);
  }
  return r;
}

SweepReport eps_sweep(
    const SweepConfig& cfg, const EddyViscosity& a,
    const std::function<SpectralVector(std::shared_ptr<const Grid3>)>&
        u0_builder) {
  require(!cfg.eps_list.empty(), "eps list must not be empty");
  for (std::size_t i = 1; i < cfg.eps_list.size(); ++i)
    require(cfg.eps_list[i] < cfg.eps_list[i - 1],
            "eps list must be strictly decreasing");

  SweepReport report;
  report.eps = cfg.eps_list;
  const double ball =
      cfg.ball_radius > 0.0 ? cfg.ball_radius : 0.25 * cfg.base.box;

  auto grid = Grid3::make(cfg.base.n, cfg.base.box);
  const SpectralVector u0 = u0_builder(grid);
  report.w_raw0 = l2_norm_sq(u0);

  for (double eps : cfg.eps_list) {
    SolverConfig member_cfg = cfg.base;
    member_cfg.eps = eps;
    member_cfg.snapshot_times = cfg.sample_times;
    try {
      Solver solver(member_cfg, a, grid);
      report.members.push_back(solver.solve(u0));
      report.member_errors.emplace_back();
      report.w_eps0.push_back(report.members.back().w_eps0);
    } catch (const std::exception& e) {
      report.members.emplace_back();
      report.member_errors.emplace_back(e.what());
      report.w_eps0.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }

  const auto member_ok = [&](std::size_t i) {
    return report.member_errors[i].empty();
  };
  for (std::size_t p = 0; p + 1 < report.members.size(); ++p) {
    std::vector<double> row(cfg.sample_times.size(),
                            std::numeric_limits<double>::quiet_NaN());
    if (member_ok(p) && member_ok(p + 1)) {
      const auto& fine = report.members[p + 1].snapshots;
      const auto& coarse = report.members[p].snapshots;
      require(fine.size() == coarse.size(), "snapshot sets must align");
      for (std::size_t s = 0; s < fine.size(); ++s)
        row[s] =
            spectral::ball_l2_distance(coarse[s].second, fine[s].second, ball);
    }
    report.pairwise.push_back(std::move(row));
  }

  // Energy inequality for the limit candidate, one-sided against W(0) of
  // the raw datum and with the unmollified K_A.
  report.limit_inequality_residual = std::numeric_limits<double>::quiet_NaN();
  if (member_ok(report.members.size() - 1)) {
    const Trajectory& last = report.members.back();
    KahanSum ij2, ik2;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < last.diag.size(); ++i) {
      if (i > 0) {
        const double dt = last.diag[i].t - last.diag[i - 1].t;
        ij2.add(0.5 * dt *
                (last.diag[i - 1].j * last.diag[i - 1].j +
                 last.diag[i].j * last.diag[i].j));
        ik2.add(0.5 * dt *
                (last.diag[i - 1].k_a * last.diag[i - 1].k_a +
                 last.diag[i].k_a * last.diag[i].k_a));
      }
      worst = std::max(worst, 0.5 * last.diag[i].w +
                                  cfg.base.nu * ij2.value() + ik2.value() -
                                  0.5 * report.w_raw0);
    }
    report.limit_inequality_residual = worst;
  }
  return report;
}

TailReport tail_report(const Trajectory& traj) {
  TailReport rep;
  rep.initial_tail_r1 = traj.initial_tail_r1;
  const double gap = traj.config.tail_r2 - traj.config.tail_r1;
  for (const auto& row : traj.diag) {
    rep.times.push_back(row.t);
    rep.tail.push_back(row.tail_r2);
    rep.max_tail = std::max(rep.max_tail, row.tail_r2);
    rep.fitted_c =
        std::max(rep.fitted_c, (row.tail_r2 - rep.initial_tail_r1) * gap);
  }
  return rep;
}

}  // namespace evns::solver
