#pragma once

#include "evns/field.hpp"

namespace evns::spectral {

// Differential operators act by wavenumber multiplication on half-spectra.

SpectralVector gradient(const SpectralScalar& s);
/// (grad u)_{ij} = d_j u_i, stored at component 3*i + j.
SpectralTensor gradient(const SpectralVector& u);
SpectralScalar divergence(const SpectralVector& u);
/// [div X]_i = d_j X_{ij}.
SpectralVector divergence(const SpectralTensor& x);
SpectralScalar laplacian(const SpectralScalar& s);

/// Orthogonal projection onto divergence-free fields (I - k k^T / |k|^2);
/// modes with zero folded wavevector (the mean and bare-Nyquist combos)
/// pass through untouched.
void leray_project(SpectralVector& u);

/// 2/3-rule truncation: zero every mode with a folded integer index above
/// floor(N/3) on any axis. Idempotent.
template <int N>
void dealias(SpectralN<N>& s);

// Norms and functionals. All integrals carry the h^3 cell volume so they
// approximate integrals over the box, and Parseval holds against the
// spectral sums to roundoff.

double l2_inner(const SpectralVector& a, const SpectralVector& b);
double l2_norm_sq(const SpectralVector& u);   // kinetic: W = int |u|^2
double grad_l2_norm_sq(const SpectralVector& u);  // J^2 = int |grad u|^2
double sup_norm(const VectorField& u);        // pointwise Euclidean, max
double max_abs(const ScalarField& f);

/// Sobolev norm per the sup-over-multi-index convention:
/// ||u||_{m,2} = sum_{j<=m} || max_{|a|=j} |D^a u| ||_{L^2}.
double sobolev_norm(const SpectralVector& u, int m);
/// V_m = sup_x max_{|a|=m} |D^a u(x)|.
double sup_derivative(const SpectralVector& u, int m);

/// Residual measure of incompressibility: sup |div u| in physical space.
double max_abs_divergence(const SpectralVector& u);

/// Half kinetic energy outside the ball of given radius about the box
/// center. Requires radius < L/2.
double tail_energy(const VectorField& u, double radius);
/// Same with the piecewise-linear radial ramp between r1 and r2 as weight.
double tail_energy_ramp(const VectorField& u, double r1, double r2);

/// L^2 distance restricted to the ball of given radius about the center.
double ball_l2_distance(const VectorField& a, const VectorField& b,
                        double radius);

/// int A |g|^2 over the grid, g a 9-component tensor field.
double weighted_grad_energy(const ScalarField& a, const TensorField& g);

/// Loop over half-spectrum modes: f(idx, kx, ky, kz, hermitian_weight).
template <typename F>
void for_each_mode(const Grid3& g, F&& f) {
  const std::size_t n = g.n();
  const std::size_t half = n / 2 + 1;
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < n; ++iz) {
    const double kz = g.wavenumber(iz);
    for (std::size_t iy = 0; iy < n; ++iy) {
      const double ky = g.wavenumber(iy);
      for (std::size_t ix = 0; ix < half; ++ix, ++idx) {
        f(idx, g.wavenumber_half(ix), ky, kz, g.spectral_weight(ix));
      }
    }
  }
}

}  // namespace evns::spectral
