#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "loopver/diag.hpp"
#include "loopver/report.hpp"
#include "loopver/version.hpp"

namespace {

void add_common(CLI::App* sub, loopver::cli::Options& opt) {
  sub->add_option("path", opt.path, "annotated .loop file")
      ->required()
      ->type_name("FILE");
  sub->add_option("--out", opt.out, "write the report (or .obl) here");
  sub->add_flag_callback("--json", [&opt] { opt.compact = true; },
                         "single-line JSON on stdout");
  sub->add_flag_callback("--pretty", [&opt] { opt.compact = false; },
                         "indented JSON on stdout (default)");
  sub->add_option("--assume-bound", opt.assume_bound,
                  "N limit for concrete-only footprints")
      ->check(CLI::NonNegativeNumber);
}

void add_oracle_flags(CLI::App* sub, loopver::cli::Options& opt) {
  sub->add_option("--n", opt.n_set, "loop bound values, comma separated")
      ->delimiter(',');
  sub->add_option("--trials", opt.trials, "schedules sampled per N")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", opt.seed, "base seed; runs seed, seed+1, seed+2");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verifier and classifier for loops with iteration contracts"};
  app.set_version_flag("--version", std::string("loopver ") + loopver::kVersion);
  app.require_subcommand(1);

  loopver::cli::Options opt;
  if (const char* c = std::getenv("LOOPVER_COLOR")) {
    opt.color = std::string(c) == "1";
  }

  auto* verify = app.add_subcommand(
      "verify", "check the iteration contract and classify the loop");
  add_common(verify, opt);
  auto* encode = app.add_subcommand(
      "encode", "write the contract-checking procedures to a .obl file");
  add_common(encode, opt);
  auto* oracle = app.add_subcommand(
      "oracle", "cross-validate the verdict by concrete execution");
  add_common(oracle, opt);
  add_oracle_flags(oracle, opt);
  auto* classify = app.add_subcommand(
      "classify", "verify without the footprint section");
  add_common(classify, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // bad usage is an input error
  }

  try {
    if (verify->parsed()) return loopver::cli::cmd_verify(opt);
    if (encode->parsed()) return loopver::cli::cmd_encode(opt);
    if (oracle->parsed()) return loopver::cli::cmd_oracle(opt);
    if (classify->parsed()) return loopver::cli::cmd_classify(opt);
  } catch (const loopver::DiagError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
