#pragma once

#include <functional>
#include <vector>

namespace evns {

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance `tol`.
/// Used for one-off normalizations and as an independent oracle for the
/// closed-form kernel evaluations; never called inside solver hot loops.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 48);

/// Integral over [a, infinity) of a decaying integrand: maps through
/// u = 1/(1+x-a) and integrates adaptively on (0, 1].
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double tol = 1e-12);

struct QuadNode {
  double x;
  double w;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
std::vector<QuadNode> gauss_legendre(int n);

}  // namespace evns
