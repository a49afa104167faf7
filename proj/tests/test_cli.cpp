#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "schema_check.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

// Captures stdout; `capture_stderr` swaps the streams instead.
CmdResult run_cmd(const std::string& args, bool capture_stderr = false) {
  std::string cmd = std::string(LOOPVER_BIN) + " " + args;
  cmd += capture_stderr ? " 2>&1 1>/dev/null" : " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  CmdResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int rc = pclose(p);
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  fs::path dir = fs::temp_directory_path() / "loopver_cli_tests";
  fs::create_directories(dir);
  fs::path path = dir / name;
  std::ofstream(path) << content;
  return path.string();
}

json schema_doc() {
  static json doc = json::parse(read_text(std::string(DOCS_DIR) +
                                          "/report.schema.json"));
  return doc;
}

void check_schema(const std::string& def, const json& report) {
  auto errs = schemacheck::errors_against(schema_doc(), def, report);
  for (const auto& e : errs) FAIL_CHECK(def << ": " << e);
}

}  // namespace

TEST_CASE("verify returns the documented exit codes") {
  CHECK(run_cmd("verify " + corpus_path("listing1.loop")).exit_code == 0);
  CHECK(run_cmd("verify " + corpus_path("listing2.loop")).exit_code == 0);
  CHECK(run_cmd("verify " + corpus_path("listing3.loop")).exit_code == 0);

  std::string broken = temp_file("send_deleted.loop", mutant_send_deleted());
  CHECK(run_cmd("verify " + broken).exit_code == 1);

  CHECK(run_cmd("verify /nonexistent/input.loop").exit_code == 2);
  std::string garbled = temp_file("garbled.loop", "for for for");
  CHECK(run_cmd("verify " + garbled).exit_code == 2);
  CHECK(run_cmd("frobnicate x.loop").exit_code == 2);
  CHECK(run_cmd("").exit_code == 2);
}

TEST_CASE("verify reports match the documented schema") {
  for (int k = 1; k <= 3; ++k) {
    auto r = run_cmd("verify " + corpus_path("listing" + std::to_string(k) +
                                             ".loop"));
    json rep = json::parse(r.out);
    check_schema("verify_report", rep);
    CHECK(rep["tool"] == "loopver");
    CHECK(rep["command"] == "verify");
    CHECK(rep["status"] == "pass");
    CHECK(rep["check"]["pass"] == true);
    CHECK(rep["balance"]["preserving"] == true);
    CHECK(rep["diagnostics"].empty());
  }

  auto v1 = json::parse(run_cmd("verify " + corpus_path("listing1.loop")).out);
  CHECK(v1["verdict"]["kind"] == "Independent");
  CHECK(v1["verdict"]["pragma"] == "independent");
  auto v2 = json::parse(run_cmd("verify " + corpus_path("listing2.loop")).out);
  CHECK(v2["verdict"]["kind"] == "ForwardOnly");
  CHECK(v2["verdict"]["pragma"] == "ivdep");
  CHECK(v2["check"]["sends"][0]["direction"] == "forward");
  auto v3 = json::parse(run_cmd("verify " + corpus_path("listing3.loop")).out);
  CHECK(v3["verdict"]["kind"] == "Backward");
  CHECK(v3["verdict"]["pragma"] == "none");
}

TEST_CASE("failure reports carry the primary diagnostic") {
  std::string broken = temp_file("send_deleted.loop", mutant_send_deleted());
  auto r = run_cmd("verify " + broken);
  CHECK(r.exit_code == 1);
  json rep = json::parse(r.out);
  check_schema("verify_report", rep);
  CHECK(rep["status"] == "fail");
  REQUIRE(rep["diagnostics"].size() == 1);
  CHECK(rep["diagnostics"][0]["code"] == "InsufficientRead");
  CHECK(rep["diagnostics"][0]["message"] ==
        "no read permission on a[i-1] at S2");
  CHECK(rep["verdict"]["kind"] == "Unverified");

  std::string garbled = temp_file("garbled.loop", "for for for");
  json bad = json::parse(run_cmd("verify " + garbled).out);
  check_schema("verify_report", bad);
  CHECK(bad["status"] == "error");
  CHECK(bad["diagnostics"][0]["code"] == "ParseError");
}

TEST_CASE("classify is verify minus the footprint work") {
  auto r = run_cmd("classify " + corpus_path("listing3.loop"));
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.out);
  check_schema("classify_report", rep);
  CHECK(rep["command"] == "classify");
  CHECK(rep["verdict"]["kind"] == "Backward");
  CHECK_FALSE(rep.contains("balance"));
  CHECK(rep.contains("check"));
}

TEST_CASE("encode writes obligations next to the input by default") {
  fs::path dir = fs::temp_directory_path() / "loopver_cli_tests";
  fs::create_directories(dir);
  fs::copy_file(corpus_path("listing2.loop"), dir / "listing2.loop",
                fs::copy_options::overwrite_existing);

  auto r = run_cmd("encode " + (dir / "listing2.loop").string());
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.out);
  check_schema("encode_report", rep);
  CHECK(rep["output"] == (dir / "listing2.obl").string());
  CHECK(rep["procedures"] ==
        json::array({"loop_main", "loop_body", "send_phi_0", "recv_phi_0"}));

  std::string obl = read_text((dir / "listing2.obl").string());
  CHECK(obl.find("is_iteration(i+1) ==> perm(a[i],1/2)") != std::string::npos);
  CHECK(obl.find("is_iteration(i-1) ==> perm(a[i-1],1/2)") != std::string::npos);

  // --out picks the destination instead.
  std::string named = (dir / "named.obl").string();
  auto r2 = run_cmd("encode " + corpus_path("listing1.loop") + " --out " + named);
  CHECK(r2.exit_code == 0);
  CHECK(json::parse(r2.out)["output"] == named);
  CHECK(read_text(named).find("void loop_main(") != std::string::npos);
}

TEST_CASE("oracle corroborates and reports per size") {
  auto r = run_cmd("oracle " + corpus_path("listing2.loop") +
                   " --n 1,2,4 --trials 10 --seed 7");
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.out);
  check_schema("oracle_report", rep);
  CHECK(rep["status"] == "pass");
  CHECK(rep["oracle"]["applicable"] == true);
  CHECK(rep["oracle"]["agree"] == true);
  REQUIRE(rep["oracle"]["per_n"].size() == 3);
  CHECK(rep["oracle"]["per_n"][0]["n"] == 1);
  CHECK(rep["oracle"]["per_n"][1]["replay"]["exhaustive"] == true);
  CHECK(rep["oracle"]["per_n"][1]["replay"]["exhaustive_orders"] == 16);
  CHECK(rep["oracle"]["observed"].size() == 1);
  CHECK(rep["oracle"]["observed"][0]["kind"] == "RAW");

  std::string broken = temp_file("send_deleted.loop", mutant_send_deleted());
  auto rb = run_cmd("oracle " + broken + " --n 4 --trials 10");
  CHECK(rb.exit_code == 1);
  json bad = json::parse(rb.out);
  check_schema("oracle_report", bad);
  CHECK(bad["status"] == "fail");
  CHECK(bad["oracle"]["applicable"] == false);
  CHECK(bad["oracle"]["per_n"][0]["replay"]["race_count"] == 3);
}

TEST_CASE("json output is deterministic byte for byte") {
  for (const char* cmd : {"verify", "classify"})
    for (int k = 1; k <= 3; ++k) {
      std::string args = std::string(cmd) + " " +
                         corpus_path("listing" + std::to_string(k) + ".loop");
      CHECK(run_cmd(args).out == run_cmd(args).out);
    }
  std::string oargs = "oracle " + corpus_path("listing2.loop") +
                      " --n 1,2 --trials 5 --seed 3";
  CHECK(run_cmd(oargs).out == run_cmd(oargs).out);
}

TEST_CASE("--json emits one compact line with the same content") {
  std::string args = "verify " + corpus_path("listing1.loop");
  auto pretty = run_cmd(args);
  auto compact = run_cmd(args + " --json");
  CHECK(compact.out.find('\n') == compact.out.size() - 1);
  CHECK(compact.out.size() < pretty.out.size());
  CHECK(json::parse(compact.out) == json::parse(pretty.out));
}

TEST_CASE("--out redirects the report file") {
  fs::path dir = fs::temp_directory_path() / "loopver_cli_tests";
  fs::create_directories(dir);
  std::string path = (dir / "report.json").string();
  auto r = run_cmd("verify " + corpus_path("listing1.loop") + " --out " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  json rep = json::parse(read_text(path));
  CHECK(rep["verdict"]["kind"] == "Independent");
}

TEST_CASE("the human summary goes to stderr") {
  auto r = run_cmd("verify " + corpus_path("listing1.loop"), true);
  CHECK(r.out.find("PASS (Independent, pragma independent)") !=
        std::string::npos);
  CHECK(r.out.find("\x1b[") == std::string::npos);

  auto f = run_cmd("verify " + temp_file("send_deleted.loop",
                                         mutant_send_deleted()), true);
  CHECK(f.out.find("FAIL") != std::string::npos);
  CHECK(f.out.find("InsufficientRead") != std::string::npos);
}

TEST_CASE("color is opt-in via the environment") {
  std::string cmd = std::string("LOOPVER_COLOR=1 ") + LOOPVER_BIN + " verify " +
                    corpus_path("listing1.loop") + " 2>&1 1>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  pclose(p);
  CHECK(out.find("\x1b[32mPASS\x1b[0m") != std::string::npos);
}
