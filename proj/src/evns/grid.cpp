#include "evns/grid.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace evns::spectral {

namespace {
std::mutex planner_mutex;  // FFTW planning is not thread-safe

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

struct Grid3::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  std::size_t n = 0;

  explicit Plans(std::size_t n_) : n(n_) {
    const int n_int = static_cast<int>(n);
    real = fftw_alloc_real(n * n * n);
    cplx = fftw_alloc_complex(n * n * (n / 2 + 1));
    std::lock_guard<std::mutex> lock(planner_mutex);
    r2c = fftw_plan_dft_r2c_3d(n_int, n_int, n_int, real, cplx, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_3d(n_int, n_int, n_int, cplx, real, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_free(real);
    fftw_free(cplx);
  }
};

Grid3::Grid3(std::size_t n, double box) : n_(n), box_(box) {
  require(is_power_of_two(n) && n >= 8, "grid size must be a power of two >= 8");
  require(box > 0.0, "box side must be positive");
  kaxis_.resize(n);
  const double base = 2.0 * pi / box;
  for (std::size_t m = 0; m < n; ++m) {
    if (m < n / 2)
      kaxis_[m] = base * static_cast<double>(m);
    else if (m == n / 2)
      kaxis_[m] = 0.0;  // unpaired Nyquist mode carries no derivative
    else
      kaxis_[m] = base * (static_cast<double>(m) - static_cast<double>(n));
  }
  plans_ = std::make_unique<Plans>(n);
}

Grid3::~Grid3() = default;

std::shared_ptr<const Grid3> Grid3::make(std::size_t n, double box) {
  return std::make_shared<const Grid3>(n, box);
}

bool Grid3::in_band(std::size_t mx, std::size_t my, std::size_t mz) const {
  const auto fold = [this](std::size_t m) {
    const auto half = static_cast<long long>(n_ / 2);
    auto v = static_cast<long long>(m);
    if (v >= half) v -= static_cast<long long>(n_);
    return v < 0 ? -v : v;
  };
  const auto cut = static_cast<long long>(dealias_cut());
  return fold(mx) <= cut && fold(my) <= cut && fold(mz) <= cut;
}

void Grid3::forward(const double* in, std::complex<double>* out) const {
  std::memcpy(plans_->real, in, sizeof(double) * points());
  fftw_execute(plans_->r2c);
  for (std::size_t i = 0; i < spectral_points(); ++i)
    out[i] = {plans_->cplx[i][0], plans_->cplx[i][1]};
}

void Grid3::inverse(const std::complex<double>* in, double* out) const {
  for (std::size_t i = 0; i < spectral_points(); ++i) {
    plans_->cplx[i][0] = in[i].real();
    plans_->cplx[i][1] = in[i].imag();
  }
  fftw_execute(plans_->c2r);
  const double scale = 1.0 / static_cast<double>(points());
  for (std::size_t i = 0; i < points(); ++i) out[i] = plans_->real[i] * scale;
}

}  // namespace evns::spectral
