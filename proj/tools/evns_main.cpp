// Command-line front end; links only the C API.
#include <evns.h>

#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static void usage(FILE* to) {
  fputs(
      "usage: evns <command> [--config PATH] [--out DIR] [--seed N] "
      "[--quiet]\n"
      "\n"
      "commands:\n"
      "  volterra-demo     blow-up, non-uniqueness, bracketing and maximum-\n"
      "                    principle scenarios with CSV artifacts\n"
      "  oseen-verify      tensor bound constants, L1 law, divergence check\n"
      "  mollifier-verify  convolution inequality measurements\n"
      "  nse-run           single regularized solve (requires --config)\n"
      "  nse-sweep         eps sweep toward the limit (requires --config)\n"
      "  all-checks        the full acceptance suite\n"
      "\n"
      "exit codes: 0 pass, 1 numerical check failure, 2 usage/config error\n",
      to);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(stderr);
    return 2;
  }
  const char* command = argv[1];
  if (strcmp(command, "--help") == 0 || strcmp(command, "-h") == 0) {
    usage(stdout);
    return 0;
  }

  const char* config = NULL;
  const char* out = NULL;
  uint64_t seed = UINT64_MAX;
  int quiet = 0;

  for (int i = 2; i < argc; ++i) {
    if (strcmp(argv[i], "--quiet") == 0) {
      quiet = 1;
    } else if (strcmp(argv[i], "--config") == 0 && i + 1 < argc) {
      config = argv[++i];
    } else if (strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      out = argv[++i];
    } else if (strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      char* end = NULL;
      seed = strtoull(argv[++i], &end, 10);
      if (end == NULL || *end != '\0') {
        fprintf(stderr, "evns: bad --seed value '%s'\n", argv[i]);
        return 2;
      }
    } else {
      fprintf(stderr, "evns: unknown argument '%s'\n", argv[i]);
      usage(stderr);
      return 2;
    }
  }

  return evns_command(command, config, out, seed, quiet);
}
