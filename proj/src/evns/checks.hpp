#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evns/config.hpp"

namespace evns::checks {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Suite {
  std::string name;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// The numbered acceptance criteria (1..10). Artifacts land in out_dir
/// when it is nonempty.
CheckResult criterion(int number, const std::string& out_dir,
                      std::uint64_t seed);
int criteria_count();
std::string criterion_name(int number);

Suite volterra_demo_suite(const std::string& out_dir, std::uint64_t seed);
Suite oseen_verify_suite(const std::string& out_dir, std::uint64_t seed);
Suite mollifier_verify_suite(const std::string& out_dir, std::uint64_t seed);
Suite nse_run_suite(const config::RunSpec& spec, const std::string& out_dir);
Suite nse_sweep_suite(const config::RunSpec& spec, const std::string& out_dir);
Suite all_checks_suite(const std::string& out_dir, std::uint64_t seed);

}  // namespace evns::checks
