#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "evns/common.hpp"

namespace evns::spectral {

/// Periodic cubic grid: N points per axis (power of two), box side L.
/// Physical storage is row-major (z, y, x) with x fastest; spectra use the
/// real-to-complex half layout (z, y, kx) with kx in [0, N/2].
///
/// Wavenumbers are the folded integers times 2 pi / L, with the Nyquist
/// index mapped to zero so that every multiplier built from them (gradient,
/// divergence, Laplacian, projector) acts on the same mode set and
/// div(grad) equals the Laplacian exactly.
class Grid3 {
 public:
  Grid3(std::size_t n, double box);
  ~Grid3();
  Grid3(const Grid3&) = delete;
  Grid3& operator=(const Grid3&) = delete;

  static std::shared_ptr<const Grid3> make(std::size_t n, double box);

  std::size_t n() const { return n_; }
  double box() const { return box_; }
  double spacing() const { return box_ / static_cast<double>(n_); }
  std::size_t points() const { return n_ * n_ * n_; }
  std::size_t spectral_points() const { return n_ * n_ * (n_ / 2 + 1); }
  double cell_volume() const {
    const double h = spacing();
    return h * h * h;
  }

  std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return (iz * n_ + iy) * n_ + ix;
  }
  double coord(std::size_t i) const { return spacing() * static_cast<double>(i); }

  /// Folded wavenumber for a full-axis index (0..N-1); Nyquist -> 0.
  double wavenumber(std::size_t m) const { return kaxis_[m]; }
  /// Wavenumber along the half axis (0..N/2).
  double wavenumber_half(std::size_t m) const { return kaxis_[m]; }

  /// Multiplicity of a half-spectrum entry in Hermitian sums.
  double spectral_weight(std::size_t kx_index) const {
    return (kx_index == 0 || kx_index == n_ / 2) ? 1.0 : 2.0;
  }

  /// Integer mode kept by the 2/3 rule: |m| <= floor(N/3).
  std::size_t dealias_cut() const { return n_ / 3; }
  bool in_band(std::size_t mx, std::size_t my, std::size_t mz) const;

  // Transforms run on internal FFTW buffers; both directions are safe to
  // call from one thread at a time per grid (each solver owns its grid).
  void forward(const double* in, std::complex<double>* out) const;
  void inverse(const std::complex<double>* in, double* out) const;

 private:
  std::size_t n_;
  double box_;
  std::vector<double> kaxis_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace evns::spectral
