#pragma once

#include <memory>
#include <vector>

#include "evns/field.hpp"
#include "evns/spectral_ops.hpp"

namespace evns::mollifier {

using spectral::Grid3;
using spectral::ScalarField;
using spectral::SpectralN;
using spectral::SpectralVector;
using spectral::VectorField;

/// The standard bump: c * exp(-1/(1-|x|^2)) on |x| < 1, zero outside,
/// normalized to unit mass in R^3 (c computed once by quadrature).
class MollifierKernel {
 public:
  MollifierKernel();
  /// Normalized profile value at radius r (zero for r >= 1).
  double value(double r) const;
  double normalization() const { return normalization_; }

 private:
  double normalization_;
};

const MollifierKernel& standard_kernel();

/// rho_eps sampled on the grid, centered at the given node offsets with
/// minimum-image distances and renormalized to exact unit grid mass.
ScalarField sampled_kernel(std::shared_ptr<const Grid3> grid, double eps,
                           double cx = 0.0, double cy = 0.0, double cz = 0.0);

/// Convolution with rho_eps as a real spectral multiplier. Evenness of the
/// bump makes the multiplier real (self-adjointness); positivity of the
/// samples bounds it by the zero mode, which renormalization pins to 1.
class BarOperator {
 public:
  /// Guards: eps >= 2h (resolution), eps <= L/2 (support fits the box).
  BarOperator(std::shared_ptr<const Grid3> grid, double eps);

  double eps() const { return eps_; }
  const Grid3& grid() const { return *grid_; }
  const std::vector<double>& multiplier() const { return multiplier_; }

  template <int N>
  void apply_in_place(SpectralN<N>& s) const {
    for (int a = 0; a < N; ++a)
      for (std::size_t i = 0; i < s.points(); ++i) s.c[a][i] *= multiplier_[i];
  }

  template <int N>
  SpectralN<N> apply(const SpectralN<N>& s) const {
    SpectralN<N> out = s;
    apply_in_place(out);
    return out;
  }

 private:
  std::shared_ptr<const Grid3> grid_;
  double eps_;
  std::vector<double> multiplier_;
};

/// Measured ratio ||D^m u_bar||_inf * eps^{3/2+m} / ||u||_{0,2}.
/// The inequality check is that this stays bounded as eps halves.
double derivative_bound_ratio(const VectorField& u, const BarOperator& bar,
                              int m);

/// Measured ratio ||u_bar - u||_{m,2} / (eps ||u||_{m-1,2}), m >= 1.
double approximation_ratio(const VectorField& u, const BarOperator& bar,
                           int m);

/// Field saturating the derivative inequality at scale eps: a translated
/// D^alpha rho_eps placed in one component. The measured ratio on it
/// approaches ||D^alpha rho||_{L^2}, which is the constant the inequality
/// actually carries.
VectorField extremal_field(std::shared_ptr<const Grid3> grid, double eps,
                           int a1, int a2, int a3);

}  // namespace evns::mollifier
