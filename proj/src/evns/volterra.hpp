#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "evns/common.hpp"

namespace evns::volterra {

// Nonlinear Volterra machinery: the operator S[a,f](t) = a + int_0^t
// K(t-t') P(f(t')) dt' on a uniform grid, with sub/supersolution bracketing
// and the maximum principle that every subsolution stays below every
// supersolution.

enum class KernelKind { constant, inverse_sqrt, tabulated };

/// Memory kernel K(t) >= 0, integrable on (0, T].
class Kernel {
 public:
  static Kernel constant(double c);
  /// K(t) = c / sqrt(nu * t); weakly singular at t = 0.
  static Kernel inverse_sqrt(double c, double nu);
  /// Samples on the problem grid (K(0), K(h), ..., K(T)); must be >= 0.
  /// Moments fall back to trapezoid, one order lower than the exact forms.
  static Kernel tabulated(std::vector<double> samples);

  KernelKind kind() const { return kind_; }
  double coefficient() const { return coeff_; }
  double viscosity() const { return nu_; }
  const std::vector<double>& samples() const { return samples_; }
  bool has_exact_moments() const { return kind_ != KernelKind::tabulated; }

  /// Cumulative mass int_0^tau K(u) du. `h` is the grid spacing, used only
  /// by tabulated kernels.
  double integral_to(double tau, double h) const;

 private:
  Kernel() = default;
  KernelKind kind_ = KernelKind::constant;
  double coeff_ = 0.0;
  double nu_ = 1.0;
  std::vector<double> samples_;
};

/// Nonlinearity P with a declared Lipschitz constant and monotonicity flag.
/// The declared properties are spot-checked by sampling before use.
struct Nonlinearity {
  std::function<double(double)> eval;
  double lipschitz = 0.0;
  bool monotone_nondecreasing = false;
  std::string name;

  static Nonlinearity linear(double alpha1, double alpha2);
  /// z^2 with the Lipschitz constant declared over [-range_hint, range_hint].
  static Nonlinearity square(double range_hint = 8.0);
  /// sqrt(max(z,0)); Lipschitz only away from 0 - the declared constant
  /// is taken on [floor, inf).
  static Nonlinearity sqrt_clamped(double floor = 1e-4);
  static Nonlinearity custom(std::function<double(double)> f, double lipschitz,
                             bool monotone, std::string name);

  /// Sampled monotonicity check on [lo, hi]; throws invalid_input on failure
  /// when the monotone flag is set.
  void validate_monotone(double lo, double hi, int points = 129) const;
  /// Sampled Lipschitz check on [lo, hi] against the declared constant.
  bool sampled_lipschitz_ok(double lo, double hi, int points = 129) const;
};

/// Piecewise-linear function on the uniform grid t_i = i*T/M, i = 0..M.
struct GridFunction {
  double horizon = 1.0;
  std::vector<double> values;
  /// First index past which values are meaningless (diverged); set by
  /// detect_blowup or by an iteration that left the finite range.
  std::optional<std::size_t> blowup_index;

  std::size_t intervals() const { return values.size() - 1; }
  double h() const { return horizon / static_cast<double>(intervals()); }
  double time(std::size_t i) const { return h() * static_cast<double>(i); }

  static GridFunction constant(double v, double horizon, std::size_t intervals);
  static GridFunction sample(const std::function<double(double)>& f,
                             double horizon, std::size_t intervals);
};

struct Problem {
  double offset = 0.0;   // a >= 0
  double horizon = 1.0;  // T > 0
  std::size_t intervals = 256;
  Kernel kernel = Kernel::constant(1.0);
  Nonlinearity nonlinearity = Nonlinearity::linear(0.0, 1.0);

  double h() const { return horizon / static_cast<double>(intervals); }
  void validate() const;
};

/// Product-integration quadrature slack used by the sub/supersolution
/// checks: c_q * h^order * L * sup|f|, order 2 for exact kernel moments and
/// 1 for tabulated ones. c_q was calibrated on the closed-form examples.
double comparison_slack(const Problem& p, const GridFunction& f);

/// S[a, f] on the problem grid. Exact per-interval kernel moments against a
/// piecewise-linear interpolant of P(f). Monotone in f for nondecreasing P.
GridFunction apply_S(const Problem& p, const GridFunction& f);

bool check_subsolution(const Problem& p, const GridFunction& f,
                       double* worst_violation = nullptr);
bool check_supersolution(const Problem& p, const GridFunction& g,
                         double* worst_violation = nullptr);

enum class StartSide { subsolution, supersolution };

struct PicardResult {
  GridFunction f;
  int iterations = 0;
  double residual = 0.0;      // sup |f - S[a,f]| at exit
  bool converged = false;
  bool monotone_ok = true;    // iterates kept the expected ordering
};

/// Iterates g_{n+1} = S[a, g_n] from a verified sub- or supersolution until
/// the sup-norm increment drops below tol. From a supersolution the iterates
/// decrease pointwise, from a subsolution they increase.
PicardResult picard_from(const Problem& p, const GridFunction& start,
                         StartSide side, int max_iter, double tol);

enum class VmaxStatus {
  holds,
  comparison_failed,
  invalid_subsolution,
  invalid_supersolution,
  invalid_nonlinearity,
};

/// Maximum principle: a verified subsolution must lie below a verified
/// supersolution up to quadrature slack. `comparison_failed` indicates a
/// quadrature or logic defect, never a legitimate outcome.
VmaxStatus vmax_check(const Problem& p, const GridFunction& f_sub,
                      const GridFunction& g_super,
                      double* worst_gap = nullptr);

/// Largest grid time tau with a + P(G) * int_0^tau K <= G (0 if none).
/// This is the device that turns a constant barrier into a local horizon.
double constant_supersolution_horizon(const Problem& p, double G);

/// First index where |f| exceeds the threshold or stops being finite.
std::optional<std::size_t> detect_blowup(const GridFunction& f,
                                         double threshold);

}  // namespace evns::volterra
