#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "evns/common.hpp"

namespace evns::oseen {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<double, 9>;  // row-major, [3*i + j]

inline double& at(Mat3& m, int i, int j) { return m[3 * i + j]; }
inline double at(const Mat3& m, int i, int j) { return m[3 * i + j]; }

/// Closed-form evaluation of the Oseen potential
///   G(t,x) = (1/|x|) int_0^{|x|} exp(-rho^2/(4 nu t)) / sqrt(t) drho,
/// its derivatives, the tensor assembled from them, and the heat kernel.
/// Everything reduces to the error integral plus the incomplete moment
/// int_0^y rho^4 exp(-rho^2) drho; below y ~ 1 the formulas switch to series
/// to dodge the cancellation between the erf and Gaussian terms.
class Evaluator {
 public:
  explicit Evaluator(double nu);

  double viscosity() const { return nu_; }

  /// G; continuous extension 1/sqrt(t) at x = 0. Requires t > 0.
  double potential(double t, const Vec3& x) const;
  /// grad G; zero at x = 0 by radial symmetry.
  Vec3 potential_gradient(double t, const Vec3& x) const;
  /// Hess G; at x = 0 the diagonal is -1/(6 nu t^{3/2}).
  Mat3 potential_hessian(double t, const Vec3& x) const;
  /// Laplacian of G in closed form: -exp(-y^2)/(2 nu t^{3/2}).
  double potential_laplacian(double t, const Vec3& x) const;
  /// d/dt G in closed form (equals nu * Laplacian G; asserted by tests).
  double potential_time_derivative(double t, const Vec3& x) const;

  /// Tensor with rows spanning the fundamental velocity responses:
  /// T_ij = Hess_ij G - delta_ij Laplacian G.
  Mat3 tensor(double t, const Vec3& x) const;

  /// Heat kernel (4 pi nu t)^{-3/2} exp(-|x|^2 / (4 nu t)).
  double heat_kernel(double t, const Vec3& x) const;

 private:
  double nu_;
};

/// Scan parameters for the normalized-bound measurement. The scan walks the
/// self-similar variable y = |x| / (2 sqrt(nu t)) at fixed (t, nu), over a
/// fixed direction set, with Richardson-extrapolated central differences for
/// the m = 1, 2 derivatives (step fd_eta relative to the parabolic length).
struct ScanSpec {
  double t = 1.0;
  double y_max = 12.0;
  int samples = 600;
  double fd_eta = 1e-2;
};

struct ScanResult {
  /// sup over the sample of (|x|^2 + nu t)^{(m+3)/2} |D^m T| / sqrt(nu).
  /// Finiteness and scan-stability of this number is the estimate check;
  /// the sqrt(nu) normalization makes it invariant across (t, nu).
  double constant = 0.0;
  /// Normalized value at the far end of the scan (the y -> infinity limit
  /// of the moment-integral assembly for m = 0).
  double tail_value = 0.0;
  double arg_y = 0.0;  // where the sup was attained
};

ScanResult estimate_constant(const Evaluator& ev, int m, const ScanSpec& spec);

/// The per-y profile behind estimate_constant (max over the direction
/// set), for serialization and plotting.
std::vector<std::pair<double, double>> scan_profile(const Evaluator& ev,
                                                    int m,
                                                    const ScanSpec& spec);

struct L1Spec {
  double y_max = 2048.0;
  int nodes_per_panel = 16;
  int mu_points = 12;
  int phi_points = 24;
  double fd_eta = 1e-2;
};

struct L1Result {
  double value = 0.0;         // int |grad T(t, .)| dx
  double law_constant = 0.0;  // value * sqrt(nu t); constant in t
};

/// L1 norm of grad T over R^3 by radial-angular quadrature in the
/// self-similar variable; grad T by finite differences of the closed form.
L1Result grad_tensor_l1_norm(const Evaluator& ev, double t,
                             const L1Spec& spec = {});

/// Direction set used by the scans (axis, face diagonal, space diagonal,
/// and two generic unit vectors).
const std::array<Vec3, 5>& scan_directions();

}  // namespace evns::oseen
