#include "evns/quadrature.hpp"

#include <cmath>

namespace evns {
namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adapt(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double tol) {
  // x = a + (1-u)/u, dx = -du/u^2; u in (0,1].
  const auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double x = a + (1.0 - u) / u;
    return f(x) / (u * u);
  };
  return integrate(g, 1e-12, 1.0, tol);
}

std::vector<QuadNode> gauss_legendre(int n) {
  std::vector<QuadNode> nodes(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i].x = x;
    nodes[i].w = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return nodes;
}

}  // namespace evns
