#include "evns/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "evns/common.hpp"

namespace evns::volterra {

namespace {

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Per-interval product-integration weights for distance d = i - j:
/// first  = (1/h) int_{(d-1)h}^{dh} K(u) (u - (d-1)h) du   (earlier node)
/// second = (1/h) int_{(d-1)h}^{dh} K(u) (dh - u) du       (later node)
struct Weights {
  std::vector<double> first;   // index d-1
  std::vector<double> second;  // index d-1
};

Weights build_weights(const Problem& p) {
  const std::size_t m = p.intervals;
  const double h = p.h();
  Weights w;
  w.first.resize(m);
  w.second.resize(m);
  switch (p.kernel.kind()) {
    case KernelKind::constant: {
      const double half = 0.5 * p.kernel.coefficient() * h;
      std::fill(w.first.begin(), w.first.end(), half);
      std::fill(w.second.begin(), w.second.end(), half);
      break;
    }
    case KernelKind::inverse_sqrt: {
      // K(u) = c / sqrt(nu u): both moments have closed forms, so the rule
      // stays second order through the endpoint singularity.
      const double c = p.kernel.coefficient();
      const double rnu = std::sqrt(p.kernel.viscosity());
      for (std::size_t d = 1; d <= m; ++d) {
        const double u1 = h * static_cast<double>(d - 1);
        const double u2 = h * static_cast<double>(d);
        const double m0 = 2.0 * c / rnu * (std::sqrt(u2) - std::sqrt(u1));
        const double m1 =
            2.0 * c / (3.0 * rnu) * (std::pow(u2, 1.5) - std::pow(u1, 1.5));
        w.first[d - 1] = (m1 - u1 * m0) / h;
        w.second[d - 1] = (u2 * m0 - m1) / h;
      }
      break;
    }
    case KernelKind::tabulated: {
      const auto& k = p.kernel.samples();
      require(k.size() == m + 1,
              "tabulated kernel needs one sample per grid node");
      for (std::size_t d = 1; d <= m; ++d) {
        const double k0 = k[d - 1];
        const double k1 = k[d];
        w.first[d - 1] = h * (k0 / 6.0 + k1 / 3.0);
        w.second[d - 1] = h * (k0 / 3.0 + k1 / 6.0);
      }
      break;
    }
  }
  return w;
}

}  // namespace

Kernel Kernel::constant(double c) {
  require(c >= 0.0, "kernel coefficient must be nonnegative");
  Kernel k;
  k.kind_ = KernelKind::constant;
  k.coeff_ = c;
  return k;
}

Kernel Kernel::inverse_sqrt(double c, double nu) {
  require(c >= 0.0, "kernel coefficient must be nonnegative");
  require(nu > 0.0, "viscosity must be positive");
  Kernel k;
  k.kind_ = KernelKind::inverse_sqrt;
  k.coeff_ = c;
  k.nu_ = nu;
  return k;
}

Kernel Kernel::tabulated(std::vector<double> samples) {
  for (double s : samples)
    require(s >= 0.0, "tabulated kernel samples must be nonnegative");
  Kernel k;
  k.kind_ = KernelKind::tabulated;
  k.samples_ = std::move(samples);
  return k;
}

double Kernel::integral_to(double tau, double h) const {
  if (tau <= 0.0) return 0.0;
  switch (kind_) {
    case KernelKind::constant:
      return coeff_ * tau;
    case KernelKind::inverse_sqrt:
      return 2.0 * coeff_ * std::sqrt(tau / nu_);
    case KernelKind::tabulated: {
      KahanSum acc;
      const auto n = static_cast<std::size_t>(std::llround(tau / h));
      require(n < samples_.size(), "tabulated kernel shorter than requested");
      for (std::size_t i = 1; i <= n; ++i)
        acc.add(0.5 * h * (samples_[i - 1] + samples_[i]));
      return acc.value();
    }
  }
  return 0.0;
}

Nonlinearity Nonlinearity::linear(double alpha1, double alpha2) {
  require(alpha2 >= 0.0, "linear nonlinearity needs alpha2 >= 0");
  return {[alpha1, alpha2](double z) { return alpha1 + alpha2 * z; },
          alpha2, true, "linear"};
}

Nonlinearity Nonlinearity::square(double range_hint) {
  // Monotone only on z >= 0, which is where the bracketing iterations live.
  return {[](double z) { return z * z; }, 2.0 * std::abs(range_hint), true,
          "square"};
}

Nonlinearity Nonlinearity::sqrt_clamped(double floor) {
  return {[](double z) { return std::sqrt(std::max(z, 0.0)); },
          0.5 / std::sqrt(floor), true, "sqrt"};
}

Nonlinearity Nonlinearity::custom(std::function<double(double)> f,
                                  double lipschitz, bool monotone,
                                  std::string name) {
  return {std::move(f), lipschitz, monotone, std::move(name)};
}

void Nonlinearity::validate_monotone(double lo, double hi, int points) const {
  if (!monotone_nondecreasing || !(hi > lo)) return;
  double prev = eval(lo);
  for (int i = 1; i < points; ++i) {
    const double z = lo + (hi - lo) * i / (points - 1);
    const double v = eval(z);
    if (v < prev - 1e-12 * (1.0 + std::abs(prev)))
      throw invalid_input("nonlinearity declared monotone but decreases near z=" +
                          std::to_string(z));
    prev = v;
  }
}

bool Nonlinearity::sampled_lipschitz_ok(double lo, double hi,
                                        int points) const {
  if (!(hi > lo)) return true;
  double zp = lo, vp = eval(lo);
  for (int i = 1; i < points; ++i) {
    const double z = lo + (hi - lo) * i / (points - 1);
    const double v = eval(z);
    if (std::abs(v - vp) >
        lipschitz * std::abs(z - zp) + 1e-10 * (1.0 + std::abs(v)))
      return false;
    zp = z;
    vp = v;
  }
  return true;
}

GridFunction GridFunction::constant(double v, double horizon,
                                    std::size_t intervals) {
  GridFunction g;
  g.horizon = horizon;
  g.values.assign(intervals + 1, v);
  return g;
}

GridFunction GridFunction::sample(const std::function<double(double)>& f,
                                  double horizon, std::size_t intervals) {
  GridFunction g;
  g.horizon = horizon;
  g.values.resize(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    g.values[i] = f(horizon * static_cast<double>(i) /
                    static_cast<double>(intervals));
  return g;
}

void Problem::validate() const {
  require(offset >= 0.0, "offset a must be nonnegative");
  require(horizon > 0.0, "horizon T must be positive");
  require(intervals >= 1, "need at least one grid interval");
}

double comparison_slack(const Problem& p, const GridFunction& f) {
  constexpr double c_q = 8.0;  // calibrated on the closed-form examples
  const double order = p.kernel.has_exact_moments() ? 2.0 : 1.0;
  const double scale = sup_abs(f.values);
  return c_q * std::pow(p.h(), order) * p.nonlinearity.lipschitz * scale +
         1e-13 * (1.0 + std::abs(p.offset) + scale);
}

GridFunction apply_S(const Problem& p, const GridFunction& f) {
  p.validate();
  require(f.values.size() == p.intervals + 1,
          "grid function does not match the problem grid");
  const std::size_t m = p.intervals;

  const auto [lo, hi] =
      std::minmax_element(f.values.begin(), f.values.end());
  p.nonlinearity.validate_monotone(*lo, *hi);

  std::vector<double> pv(m + 1);
  for (std::size_t i = 0; i <= m; ++i) pv[i] = p.nonlinearity.eval(f.values[i]);

  GridFunction out;
  out.horizon = f.horizon;
  out.values.assign(m + 1, p.offset);

  if (p.kernel.kind() == KernelKind::constant) {
    // Convolution with a constant collapses to a running trapezoid.
    const double ch = p.kernel.coefficient() * p.h();
    KahanSum acc;
    for (std::size_t i = 1; i <= m; ++i) {
      acc.add(0.5 * ch * (pv[i - 1] + pv[i]));
      out.values[i] = p.offset + acc.value();
    }
    return out;
  }

  const Weights w = build_weights(p);
  for (std::size_t i = 1; i <= m; ++i) {
    KahanSum acc;
    for (std::size_t d = 1; d <= i; ++d) {
      acc.add(w.first[d - 1] * pv[i - d]);
      acc.add(w.second[d - 1] * pv[i - d + 1]);
    }
    out.values[i] = p.offset + acc.value();
  }
  return out;
}

bool check_subsolution(const Problem& p, const GridFunction& f,
                       double* worst_violation) {
  const GridFunction s = apply_S(p, f);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.values.size(); ++i)
    worst = std::max(worst, f.values[i] - s.values[i]);
  if (worst_violation) *worst_violation = worst;
  return worst <= comparison_slack(p, f);
}

bool check_supersolution(const Problem& p, const GridFunction& g,
                         double* worst_violation) {
  const GridFunction s = apply_S(p, g);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.values.size(); ++i)
    worst = std::max(worst, s.values[i] - g.values[i]);
  if (worst_violation) *worst_violation = worst;
  return worst <= comparison_slack(p, g);
}

PicardResult picard_from(const Problem& p, const GridFunction& start,
                         StartSide side, int max_iter, double tol) {
  const bool valid = side == StartSide::subsolution
                         ? check_subsolution(p, start)
                         : check_supersolution(p, start);
  if (!valid)
    throw invalid_input(side == StartSide::subsolution
                            ? "start is not a verified subsolution"
                            : "start is not a verified supersolution");

  PicardResult res;
  res.f = start;
  const double dir = side == StartSide::subsolution ? 1.0 : -1.0;
  for (int it = 0; it < max_iter; ++it) {
    GridFunction next = apply_S(p, res.f);
    res.iterations = it + 1;

    double increment = 0.0;
    const double slack = comparison_slack(p, res.f);
    bool finite = true;
    for (std::size_t i = 0; i < next.values.size(); ++i) {
      const double step = next.values[i] - res.f.values[i];
      if (!std::isfinite(next.values[i])) {
        finite = false;
        if (!next.blowup_index) next.blowup_index = i;
        continue;
      }
      increment = std::max(increment, std::abs(step));
      if (dir * step < -slack) res.monotone_ok = false;
    }
    res.f = std::move(next);
    if (!finite) {
      res.converged = false;
      break;
    }
    if (increment <= tol) {
      res.converged = true;
      break;
    }
  }
  if (res.converged) {
    const GridFunction s = apply_S(p, res.f);
    double r = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i)
      r = std::max(r, std::abs(res.f.values[i] - s.values[i]));
    res.residual = r;
  } else {
    res.residual = std::numeric_limits<double>::infinity();
  }
  return res;
}

VmaxStatus vmax_check(const Problem& p, const GridFunction& f_sub,
                      const GridFunction& g_super, double* worst_gap) {
  const auto range = [](const GridFunction& g) {
    auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
    return std::pair<double, double>(*lo, *hi);
  };
  const auto [flo, fhi] = range(f_sub);
  const auto [glo, ghi] = range(g_super);
  const double lo = std::min(flo, glo), hi = std::max(fhi, ghi);

  if (!p.nonlinearity.monotone_nondecreasing ||
      !p.nonlinearity.sampled_lipschitz_ok(lo, hi))
    return VmaxStatus::invalid_nonlinearity;
  if (!check_subsolution(p, f_sub)) return VmaxStatus::invalid_subsolution;
  if (!check_supersolution(p, g_super))
    return VmaxStatus::invalid_supersolution;

  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f_sub.values.size(); ++i)
    worst = std::max(worst, f_sub.values[i] - g_super.values[i]);
  if (worst_gap) *worst_gap = worst;

  const double slack =
      std::max(comparison_slack(p, f_sub), comparison_slack(p, g_super));
  return worst <= slack ? VmaxStatus::holds : VmaxStatus::comparison_failed;
}

double constant_supersolution_horizon(const Problem& p, double G) {
  require(G > p.offset, "barrier G must exceed the offset a");
  const double pg = p.nonlinearity.eval(G);
  const double h = p.h();
  const double eps = 1e-12 * (1.0 + std::abs(G));
  for (std::size_t i = p.intervals; i >= 1; --i) {
    const double t = h * static_cast<double>(i);
    if (p.offset + pg * p.kernel.integral_to(t, h) <= G + eps) return t;
  }
  return 0.0;
}

std::optional<std::size_t> detect_blowup(const GridFunction& f,
                                         double threshold) {
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!std::isfinite(f.values[i]) || std::abs(f.values[i]) > threshold)
      return i;
  }
  return std::nullopt;
}

}  // namespace evns::volterra
