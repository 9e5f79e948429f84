#pragma once

#include <cstdint>
#include <random>

namespace evns {

/// Single seeded generator per run; every stochastic choice in the toolkit
/// draws from one of these so a run is reproducible from the recorded seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double normal(double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(eng_);
  }
  std::uint64_t integer(std::uint64_t n) {  // in [0, n)
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace evns
