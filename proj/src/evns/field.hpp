#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "evns/grid.hpp"

namespace evns::spectral {

/// Value-semantic grid field with N real components.
template <int N>
struct FieldN {
  std::shared_ptr<const Grid3> grid;
  std::array<std::vector<double>, N> c;

  FieldN() = default;
  explicit FieldN(std::shared_ptr<const Grid3> g) : grid(std::move(g)) {
    for (auto& comp : c) comp.assign(grid->points(), 0.0);
  }
  std::size_t points() const { return grid->points(); }
};

/// Half-spectrum counterpart (Hermitian symmetry implicit).
template <int N>
struct SpectralN {
  std::shared_ptr<const Grid3> grid;
  std::array<std::vector<std::complex<double>>, N> c;

  SpectralN() = default;
  explicit SpectralN(std::shared_ptr<const Grid3> g) : grid(std::move(g)) {
    for (auto& comp : c) comp.assign(grid->spectral_points(), {0.0, 0.0});
  }
  std::size_t points() const { return grid->spectral_points(); }
};

using ScalarField = FieldN<1>;
using VectorField = FieldN<3>;
using TensorField = FieldN<9>;  // row-major: entry (i,j) at component 3*i+j

using SpectralScalar = SpectralN<1>;
using SpectralVector = SpectralN<3>;
using SpectralTensor = SpectralN<9>;

template <int N>
SpectralN<N> transform(const FieldN<N>& f) {
  SpectralN<N> out(f.grid);
  for (int a = 0; a < N; ++a) f.grid->forward(f.c[a].data(), out.c[a].data());
  return out;
}

template <int N>
FieldN<N> inverse_transform(const SpectralN<N>& s) {
  FieldN<N> out(s.grid);
  for (int a = 0; a < N; ++a) s.grid->inverse(s.c[a].data(), out.c[a].data());
  return out;
}

}  // namespace evns::spectral
