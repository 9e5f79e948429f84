// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
//   evns-acceptance [--criterion N] [--out DIR] [--seed N]
//
// Criterion 2's second clause documents a barrier that is not actually a
// supersolution of the sqrt equation on [0,1]; the check is implemented as
// stated and reports honestly (see the detail string it prints).
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "evns/checks.hpp"

int main(int argc, char** argv) {
  int criterion_arg = 0;
  std::string out_dir = "acceptance_out";
  std::uint64_t seed = 20250810;

  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      criterion_arg = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      out_dir = argv[++i];
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      seed = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::fprintf(stderr,
                   "usage: evns-acceptance [--criterion N] [--out DIR] "
                   "[--seed N]\n");
      return 2;
    }
  }

  bool all_pass = true;
  const int lo = criterion_arg > 0 ? criterion_arg : 1;
  const int hi = criterion_arg > 0 ? criterion_arg : evns::checks::criteria_count();
  for (int k = lo; k <= hi; ++k) {
    const auto res = evns::checks::criterion(k, out_dir, seed);
    std::printf("[%s] %02d %-24s %s\n", res.pass ? "PASS" : "FAIL", k,
                res.name.c_str(), res.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && res.pass;
  }
  return all_pass ? 0 : 1;
}
