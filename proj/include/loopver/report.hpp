#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace loopver::cli {

struct Options {
  std::string path;
  std::string out;      // report destination; empty writes to stdout
  bool compact = false; // --json: single-line JSON (default is indented)
  std::vector<long long> n_set = {1, 2, 4, 8};
  int trials = 20;
  uint64_t seed = 1;
  long long assume_bound = 16;
  bool color = false;   // stderr summary only; stdout stays plain
};

// Exit codes: 0 pass, 1 verification or oracle failure, 2 input error.
// Each command writes one JSON report to stdout (or --out) and a one-line
// human summary to stderr.
int cmd_verify(const Options& opt);
int cmd_encode(const Options& opt);
int cmd_oracle(const Options& opt);
int cmd_classify(const Options& opt);

}  // namespace loopver::cli
