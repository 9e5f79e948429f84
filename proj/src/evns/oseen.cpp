#include "evns/oseen.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "evns/common.hpp"
#include "evns/quadrature.hpp"

namespace evns::oseen {

namespace {

constexpr double series_switch = 1.1;

double norm3(const Vec3& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

/// erf(y)/y, stable through y = 0.
double erf_over_y(double y) {
  if (y > 0.5) return std::erf(y) / y;
  // 2/sqrt(pi) * sum (-1)^n y^{2n} / (n! (2n+1))
  double term = 1.0, sum = 0.0;
  const double y2 = y * y;
  for (int n = 0;; ++n) {
    const double contrib = term / (2 * n + 1);
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
    term *= -y2 / (n + 1);
    if (n > 40) break;
  }
  return 2.0 / std::sqrt(pi) * sum;
}

/// (2 y e^{-y^2} - sqrt(pi) erf(y)) / y^3: the radial gradient profile.
/// Series: sum_{n>=1} 4 (-1)^n n y^{2n-2} / ((2n+1) n!).
double gradient_profile(double y) {
  if (y > series_switch) {
    const double y3 = y * y * y;
    return (2.0 * y * std::exp(-y * y) - std::sqrt(pi) * std::erf(y)) / y3;
  }
  const double y2 = y * y;
  double pow = 1.0;  // y^{2n-2} at n = 1
  double fact = 1.0;
  double sum = 0.0, sign = -1.0;
  for (int n = 1; n <= 60; ++n) {
    fact *= n;
    const double contrib = sign * 4.0 * n / ((2.0 * n + 1.0) * fact) * pow;
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    pow *= y2;
    sign = -sign;
  }
  return sum;
}

/// int_0^y rho^4 e^{-rho^2} drho / y^5.
/// Series: sum (-1)^n y^{2n} / (n! (2n+5)); closed form via erf above the
/// switch where the cancellation has died down.
double moment4_over_y5(double y) {
  if (y > series_switch) {
    const double i4 = 3.0 * std::sqrt(pi) / 8.0 * std::erf(y) -
                      std::exp(-y * y) * (0.75 * y + 0.5 * y * y * y);
    return i4 / std::pow(y, 5);
  }
  const double y2 = y * y;
  double term = 1.0, sum = 0.0;
  for (int n = 0; n <= 60; ++n) {
    const double contrib = term / (2.0 * n + 5.0);
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    term *= -y2 / (n + 1.0);
  }
  return sum;
}

struct Radial {
  double a;  // coefficient of delta_ij
  double b;  // coefficient of x_i x_j
};

/// Hessian of G as a(t,r) delta_ij + b(t,r) x_i x_j.
Radial hessian_profile(double nu, double t, double r) {
  const double c = 0.5 / std::sqrt(nu * t);
  const double y = c * r;
  const double rnu = std::sqrt(nu);
  const double gauss = std::exp(-y * y);
  const double m5 = moment4_over_y5(y);  // I4 / y^5
  const double c3 = c * c * c;
  const double b = 8.0 * rnu * c3 * c * c * m5;
  const double a =
      -gauss / (6.0 * nu * std::pow(t, 1.5)) - (8.0 * rnu / 3.0) * c3 * (y * y * m5);
  return {a, b};
}

}  // namespace

Evaluator::Evaluator(double nu) : nu_(nu) {
  require(nu > 0.0, "viscosity must be positive");
}

double Evaluator::potential(double t, const Vec3& x) const {
  require(t > 0.0, "potential needs t > 0");
  const double r = norm3(x);
  const double y = 0.5 * r / std::sqrt(nu_ * t);
  return erf_over_y(y) * std::sqrt(pi) / (2.0 * std::sqrt(t));
}

Vec3 Evaluator::potential_gradient(double t, const Vec3& x) const {
  require(t > 0.0, "potential_gradient needs t > 0");
  const double r = norm3(x);
  const double c = 0.5 / std::sqrt(nu_ * t);
  const double g1 = std::sqrt(nu_) * c * c * c * gradient_profile(c * r);
  return {x[0] * g1, x[1] * g1, x[2] * g1};
}

Mat3 Evaluator::potential_hessian(double t, const Vec3& x) const {
  require(t > 0.0, "potential_hessian needs t > 0");
  const double r = norm3(x);
  const Radial h = hessian_profile(nu_, t, r);
  Mat3 m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      at(m, i, j) = h.b * (x[i] * x[j]) + (i == j ? h.a : 0.0);
  }
  return m;
}

double Evaluator::potential_laplacian(double t, const Vec3& x) const {
  require(t > 0.0, "potential_laplacian needs t > 0");
  const double r = norm3(x);
  const double y = 0.5 * r / std::sqrt(nu_ * t);
  return -std::exp(-y * y) / (2.0 * nu_ * std::pow(t, 1.5));
}

double Evaluator::potential_time_derivative(double t, const Vec3& x) const {
  require(t > 0.0, "potential_time_derivative needs t > 0");
  const double r = norm3(x);
  const double y = 0.5 * r / std::sqrt(nu_ * t);
  return -std::exp(-y * y) / (2.0 * std::pow(t, 1.5));
}

Mat3 Evaluator::tensor(double t, const Vec3& x) const {
  require(t > 0.0, "tensor needs t > 0");
  const double r = norm3(x);
  const Radial h = hessian_profile(nu_, t, r);
  const double lap = potential_laplacian(t, x);
  const double a = h.a - lap;
  Mat3 m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      at(m, i, j) = h.b * (x[i] * x[j]) + (i == j ? a : 0.0);
  }
  return m;
}

double Evaluator::heat_kernel(double t, const Vec3& x) const {
  require(t > 0.0, "heat_kernel needs t > 0");
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  return std::pow(4.0 * pi * nu_ * t, -1.5) * std::exp(-r2 / (4.0 * nu_ * t));
}

const std::array<Vec3, 5>& scan_directions() {
  static const std::array<Vec3, 5> dirs = [] {
    std::array<Vec3, 5> d = {{{1.0, 0.0, 0.0},
                              {1.0, 1.0, 0.0},
                              {1.0, 1.0, 1.0},
                              {0.36, 0.48, 0.80},
                              {0.60, -0.64, 0.48}}};
    for (auto& v : d) {
      const double n = norm3(v);
      for (auto& c : v) c /= n;
    }
    return d;
  }();
  return dirs;
}

namespace {

double max_abs(const Mat3& m) {
  double v = 0.0;
  for (double e : m) v = std::max(v, std::abs(e));
  return v;
}

Mat3 add_scaled(const Mat3& a, const Mat3& b, double sa, double sb) {
  Mat3 r{};
  for (int i = 0; i < 9; ++i) r[i] = sa * a[i] + sb * b[i];
  return r;
}

Vec3 shifted(const Vec3& x, int axis, double d) {
  Vec3 y = x;
  y[axis] += d;
  return y;
}

/// max_{i,j,k} | d/dx_k T_ij | by Richardson-extrapolated central
/// differences (O(h^4)).
double tensor_d1_max(const Evaluator& ev, double t, const Vec3& x, double h) {
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto d_at = [&](double step) {
      const Mat3 p = ev.tensor(t, shifted(x, k, step));
      const Mat3 m = ev.tensor(t, shifted(x, k, -step));
      return add_scaled(p, m, 0.5 / step, -0.5 / step);
    };
    const Mat3 coarse = d_at(h);
    const Mat3 fine = d_at(0.5 * h);
    const Mat3 extrap = add_scaled(fine, coarse, 4.0 / 3.0, -1.0 / 3.0);
    worst = std::max(worst, max_abs(extrap));
  }
  return worst;
}

/// max over |alpha| = 2 multi-indices of | D^alpha T_ij |.
double tensor_d2_max(const Evaluator& ev, double t, const Vec3& x, double h) {
  double worst = 0.0;
  const Mat3 center = ev.tensor(t, x);
  for (int k = 0; k < 3; ++k) {
    const auto d2_at = [&](double step) {
      const Mat3 p = ev.tensor(t, shifted(x, k, step));
      const Mat3 m = ev.tensor(t, shifted(x, k, -step));
      Mat3 r{};
      for (int i = 0; i < 9; ++i)
        r[i] = (p[i] - 2.0 * center[i] + m[i]) / (step * step);
      return r;
    };
    const Mat3 coarse = d2_at(h);
    const Mat3 fine = d2_at(0.5 * h);
    worst = std::max(
        worst, max_abs(add_scaled(fine, coarse, 16.0 / 15.0, -1.0 / 15.0)));
  }
  for (int k = 0; k < 3; ++k) {
    for (int l = k + 1; l < 3; ++l) {
      const auto cross_at = [&](double step) {
        const Mat3 pp = ev.tensor(t, shifted(shifted(x, k, step), l, step));
        const Mat3 pm = ev.tensor(t, shifted(shifted(x, k, step), l, -step));
        const Mat3 mp = ev.tensor(t, shifted(shifted(x, k, -step), l, step));
        const Mat3 mm = ev.tensor(t, shifted(shifted(x, k, -step), l, -step));
        Mat3 r{};
        for (int i = 0; i < 9; ++i)
          r[i] = (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * step * step);
        return r;
      };
      const Mat3 coarse = cross_at(h);
      const Mat3 fine = cross_at(0.5 * h);
      worst = std::max(
          worst, max_abs(add_scaled(fine, coarse, 16.0 / 15.0, -1.0 / 15.0)));
    }
  }
  return worst;
}

double normalized_bound(const Evaluator& ev, int m, double t, double y,
                        const Vec3& dir, double fd_eta) {
  const double nu = ev.viscosity();
  const double scale = 2.0 * std::sqrt(nu * t);  // parabolic length
  const double r = scale * y;
  const Vec3 x = {dir[0] * r, dir[1] * r, dir[2] * r};
  double deriv = 0.0;
  if (m == 0) {
    deriv = max_abs(ev.tensor(t, x));
  } else {
    const double h = fd_eta * 0.5 * scale * (1.0 + y);
    deriv = m == 1 ? tensor_d1_max(ev, t, x, h) : tensor_d2_max(ev, t, x, h);
  }
  const double base = r * r + nu * t;
  return std::pow(base, 0.5 * (m + 3)) * deriv / std::sqrt(nu);
}

}  // namespace

ScanResult estimate_constant(const Evaluator& ev, int m, const ScanSpec& spec) {
  require(m >= 0 && m <= 2, "estimate_constant supports m = 0, 1, 2");
  require(spec.t > 0.0 && spec.y_max > 0.0 && spec.samples >= 2,
          "bad scan spec");
  ScanResult res;
  for (int s = 0; s < spec.samples; ++s) {
    const double y = spec.y_max * s / (spec.samples - 1.0);
    for (const Vec3& dir : scan_directions()) {
      const double v = normalized_bound(ev, m, spec.t, y, dir, spec.fd_eta);
      require(std::isfinite(v),
              "non-finite normalized bound at t=" + std::to_string(spec.t) +
                  ", |x|=" +
                  std::to_string(2.0 * std::sqrt(ev.viscosity() * spec.t) * y));
      if (v > res.constant) {
        res.constant = v;
        res.arg_y = y;
      }
      if (s == spec.samples - 1) res.tail_value = std::max(res.tail_value, v);
    }
  }
  return res;
}

std::vector<std::pair<double, double>> scan_profile(const Evaluator& ev,
                                                    int m,
                                                    const ScanSpec& spec) {
  require(m >= 0 && m <= 2, "scan_profile supports m = 0, 1, 2");
  std::vector<std::pair<double, double>> rows;
  rows.reserve(spec.samples);
  for (int s = 0; s < spec.samples; ++s) {
    const double y = spec.y_max * s / (spec.samples - 1.0);
    double v = 0.0;
    for (const Vec3& dir : scan_directions())
      v = std::max(v, normalized_bound(ev, m, spec.t, y, dir, spec.fd_eta));
    rows.emplace_back(y, v);
  }
  return rows;
}

L1Result grad_tensor_l1_norm(const Evaluator& ev, double t,
                             const L1Spec& spec) {
  require(t > 0.0, "grad_tensor_l1_norm needs t > 0");
  const double nu = ev.viscosity();
  const double scale = 2.0 * std::sqrt(nu * t);

  // Angular nodes: Gauss-Legendre in mu = cos(theta), uniform in phi.
  const auto mu_nodes = gauss_legendre(spec.mu_points);
  std::vector<Vec3> dirs;
  std::vector<double> weights;
  for (const auto& mn : mu_nodes) {
    const double sin_th = std::sqrt(std::max(0.0, 1.0 - mn.x * mn.x));
    for (int p = 0; p < spec.phi_points; ++p) {
      const double phi = 2.0 * pi * p / spec.phi_points;
      dirs.push_back({sin_th * std::cos(phi), sin_th * std::sin(phi), mn.x});
      weights.push_back(mn.w * 2.0 * pi / spec.phi_points);
    }
  }

  // Radial panels in y: fine near the core, geometric out to the cutoff.
  std::vector<double> edges = {0.0, 0.5, 1.0};
  while (edges.back() < spec.y_max)
    edges.push_back(std::min(2.0 * edges.back(), spec.y_max));
  const auto gl = gauss_legendre(spec.nodes_per_panel);

  KahanSum total;
  for (std::size_t pnl = 0; pnl + 1 < edges.size(); ++pnl) {
    const double a = edges[pnl], b = edges[pnl + 1];
    for (const auto& node : gl) {
      const double y = 0.5 * (a + b) + 0.5 * (b - a) * node.x;
      const double wy = 0.5 * (b - a) * node.w;
      const double r = scale * y;
      const double h = spec.fd_eta * 0.5 * scale * (1.0 + y);
      KahanSum shell;
      for (std::size_t d = 0; d < dirs.size(); ++d) {
        const Vec3 x = {dirs[d][0] * r, dirs[d][1] * r, dirs[d][2] * r};
        shell.add(weights[d] * tensor_d1_max(ev, t, x, h));
      }
      total.add(wy * y * y * shell.value());
    }
  }
  L1Result out;
  out.value = total.value() * scale * scale * scale;
  out.law_constant = out.value * std::sqrt(nu * t);
  return out;
}

}  // namespace evns::oseen
