#pragma once

#include <functional>
#include <memory>

#include "evns/field.hpp"

namespace evns::solver {

using spectral::Grid3;
using spectral::ScalarField;

/// Nonnegative space-time coefficient A(t, x), compactly supported inside
/// the ball of radius support_radius about the box center. The rule takes
/// (t, rx, ry, rz) with r the displacement from the center.
struct EddyViscosity {
  std::function<double(double, double, double, double)> rule;
  double support_radius = 0.0;
  bool time_constant = true;

  static EddyViscosity zero();
  /// amplitude * exp(1 - 1/(1 - (r/r0)^2)) inside r0: smooth, compact,
  /// peak value = amplitude at the center.
  static EddyViscosity bump(double amplitude, double r0);

  bool is_zero() const { return !static_cast<bool>(rule); }

  /// Samples A(t, .) on the grid and validates nonnegativity and support.
  ScalarField sample(std::shared_ptr<const Grid3> grid, double t) const;
  /// sup of the samples (the N_A diagnostic).
  double sup_sample(std::shared_ptr<const Grid3> grid, double t) const;
  /// Crude W^{1,inf} witness: max centered-difference gradient magnitude.
  double grad_sup_estimate(std::shared_ptr<const Grid3> grid, double t) const;
};

}  // namespace evns::solver
