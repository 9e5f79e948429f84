#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

namespace evns {

inline constexpr double pi = std::numbers::pi;

/// Thrown on violated preconditions (bad arguments, guard violations).
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative process fails to converge.
class no_convergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Compensated (Kahan) accumulator. Fixed summation order, so results are
/// reproducible regardless of how callers chunk their loops.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline double kahan_total(std::span<const double> xs) {
  KahanSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw invalid_input(msg);
}

inline bool nearly_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace evns
