#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "evns/eddy_viscosity.hpp"
#include "evns/field.hpp"
#include "evns/mollifier.hpp"

namespace evns::solver {

using spectral::Grid3;
using spectral::ScalarField;
using spectral::SpectralScalar;
using spectral::SpectralTensor;
using spectral::SpectralVector;
using spectral::VectorField;

struct SolverConfig {
  double nu = 0.1;
  double eps = 0.0;   // mollifier scale, >= 2h
  std::size_t n = 32;
  double box = 2.0 * pi;
  double horizon = 1.0;
  double dt = 1.0 / 128.0;
  double picard_tol = 1e-10;  // relative to sqrt(W_eps(0))
  int picard_max = 60;
  bool dealias = true;  // 2/3 rule on every quadratic product
  int hm_max = 2;       // H^m / V_m monitor depth
  int hm_every = 1;     // steps between monitor rows (0 disables)
  double tail_r1 = -1.0;  // inner tail radius; < 0 picks L/4
  double tail_r2 = -1.0;  // outer tail radius; < 0 picks 3L/8
  std::vector<double> snapshot_times;
  bool enforce_dt_guard = true;

  double spacing() const { return box / static_cast<double>(n); }
  void validate() const;
};

struct StepStats {
  double t = 0.0;                  // time at the start of the step
  int picard_iterations = 0;
  double contraction_ratio = 0.0;  // first observed increment ratio
  double final_increment = 0.0;
};

struct DiagRow {
  double t = 0.0;
  double w = 0.0;        // kinetic energy
  double j = 0.0;        // ||grad u||_{0,2}
  double k_a_eps = 0.0;  // sqrt(int A |grad u_bar|^2)
  double k_a = 0.0;      // sqrt(int A |grad u|^2), the unmollified variant
  double v = 0.0;        // sup |u|
  double balance_residual = 0.0;
  double tail_r2 = 0.0;
};

struct HmRow {
  double t = 0.0;
  int m = 0;
  double hm_norm = 0.0;
  double vm = 0.0;
};

struct Trajectory {
  std::shared_ptr<const Grid3> grid;
  SolverConfig config;
  std::vector<DiagRow> diag;
  std::vector<StepStats> steps;
  std::vector<HmRow> hm;
  std::vector<std::pair<double, VectorField>> snapshots;
  std::vector<std::pair<double, ScalarField>> pressure_snapshots;
  double w_raw0 = 0.0;  // ||u0||^2 before mollification
  double w_eps0 = 0.0;  // after mollify + project: the balance reference
  double n_a = 0.0;     // sup A over the grid
  double a_grad_sup = 0.0;
  double dt_guard = 0.0;
  double max_divergence = 0.0;  // worst sup |div u| seen along the run
  double initial_tail_r1 = 0.0;  // 1/2 int_{|x| >= R1} |u(0)|^2

  double median_contraction() const;
  double max_abs_balance_residual() const;
  bool energy_monotone() const;  // W non-increasing sample to sample
};

/// Regularized system integrator: heat semigroup exactly, the projected
/// -div X forcing by the exponential-integrator trapezoid, the within-step
/// fixed point iterated to tolerance. On the torus this composition is the
/// exact discrete counterpart of convolving the forcing history with the
/// gradient of the fundamental tensor.
class Solver {
 public:
  Solver(SolverConfig cfg, EddyViscosity a,
         std::shared_ptr<const Grid3> grid = nullptr);

  const SolverConfig& config() const { return cfg_; }
  std::shared_ptr<const Grid3> grid() const { return grid_; }
  const mollifier::BarOperator& bar() const { return *bar_; }

  /// X_ij = u_i u_bar_j - bar(A d_j u_bar_i), dealiased.
  SpectralTensor compute_X(const SpectralVector& u_hat, double t) const;
  /// Leray-projected -div X: the forcing entering the Duhamel integral.
  SpectralVector forcing(const SpectralVector& u_hat, double t) const;
  /// Advance one step in place; returns the fixed-point statistics.
  StepStats duhamel_step(SpectralVector& u_hat, double t) const;
  /// p from the spectral Poisson solve, zero mean.
  SpectralScalar pressure_field(const SpectralVector& u_hat, double t) const;
  /// Mollify, project (kills discretization divergence), dealias.
  SpectralVector prepare_initial(const SpectralVector& u0_raw) const;
  /// <-div bar(A grad u_bar), u> = int A |grad u_bar|^2, as a grid sum.
  double eddy_power(const SpectralVector& u_hat, double t) const;

  Trajectory solve(const SpectralVector& u0_raw) const;

 private:
  const ScalarField& a_field(double t) const;

  SolverConfig cfg_;
  EddyViscosity a_;
  std::shared_ptr<const Grid3> grid_;
  std::unique_ptr<mollifier::BarOperator> bar_;
  std::vector<double> decay_, w0_, w1_;  // per-mode ETD coefficients
  mutable std::optional<ScalarField> a_cache_;
  mutable double a_cache_t_ = 0.0;
};

/// Trapezoid-in-time residual of the energy balance, recomputed from the
/// recorded diagnostics: r(t) = W/2 + nu int J^2 + int K_{A,eps}^2 - W_eps(0)/2.
std::vector<double> energy_balance_residual(const Trajectory& traj);

struct SweepConfig {
  SolverConfig base;              // eps is overridden per member
  std::vector<double> eps_list;   // strictly decreasing, all >= 2h
  std::vector<double> sample_times;
  double ball_radius = -1.0;      // < 0 picks L/4
};

struct SweepReport {
  std::vector<double> eps;
  std::vector<Trajectory> members;
  /// One entry per member; empty when the member ran clean. A failure in
  /// one member never aborts the others.
  std::vector<std::string> member_errors;
  std::vector<double> w_eps0;
  double w_raw0 = 0.0;
  /// pairwise[p][s] = || u_{eps_p}(t_s) - u_{eps_{p+1}}(t_s) ||_{L2(B_R)};
  /// NaN when either side failed.
  std::vector<std::vector<double>> pairwise;
  /// max_t of W/2 + nu int J^2 + int K_A^2 - W(0)/2 for the smallest eps;
  /// the limit candidate must keep this below a one-sided tolerance.
  double limit_inequality_residual = 0.0;

  bool all_members_ok() const {
    for (const auto& e : member_errors)
      if (!e.empty()) return false;
    return true;
  }
};

SweepReport eps_sweep(
    const SweepConfig& cfg, const EddyViscosity& a,
    const std::function<SpectralVector(std::shared_ptr<const Grid3>)>&
        u0_builder);

struct TailReport {
  std::vector<double> times;
  std::vector<double> tail;      // 1/2 int_{|x| >= R2} |u|^2
  double initial_tail_r1 = 0.0;  // 1/2 int_{|x| >= R1} |u0|^2
  double fitted_c = 0.0;         // max_t (tail - initial) * (R2 - R1)
  double max_tail = 0.0;
};

/// Tail-energy series against the barrier initial_tail(R1) + C/(R2-R1),
/// built from the columns recorded at the trajectory's (R1, R2).
TailReport tail_report(const Trajectory& traj);

}  // namespace evns::solver
