#include "loopver/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "loopver/aggregator.hpp"
#include "loopver/body_checker.hpp"
#include "loopver/classifier.hpp"
#include "loopver/encoder.hpp"
#include "loopver/oracle.hpp"
#include "loopver/version.hpp"

namespace loopver::cli {

using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Code::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json diag_json(const Diagnostic& d) {
  return {{"code", code_name(d.code)},
          {"message", d.message},
          {"line", d.span.line},
          {"col", d.span.col}};
}

json report_skeleton(const char* command, const Options& opt) {
  return {{"tool", "loopver"},
          {"version", kVersion},
          {"command", command},
          {"input", opt.path},
          {"status", "pass"},
          {"diagnostics", json::array()}};
}

struct Names {
  std::string iter = "i";
  std::string bound = "N";
};

Names names_of(const frontend::ValidatedProgram& vp) {
  Names n;
  n.iter = vp.iter_var;
  if (!vp.bound_param.empty()) n.bound = vp.bound_param;
  return n;
}

json check_json(const frontend::ValidatedProgram& vp,
                const checker::CheckReport& rep) {
  Names nm = names_of(vp);
  json regions = json::array();
  for (const auto& r : rep.regions) {
    json steps = json::array();
    for (const auto& s : r.trace)
      steps.push_back({{"stmt", s.stmt},
                       {"action", checker::action_name(s.action)},
                       {"cell", cell_str(s.cell, nm.iter, nm.bound)},
                       {"before", s.before.str()},
                       {"after", s.after.str()}});
    json rj = {{"region", r.region.str(nm.iter, nm.bound)},
               {"pass", r.pass}};
    if (r.diag) rj["diagnostic"] = diag_json(*r.diag);
    rj["trace"] = std::move(steps);
    regions.push_back(std::move(rj));
  }
  json sends = json::array();
  for (const auto& s : rep.sends_used)
    sends.push_back({{"site", s.site},
                     {"label", s.label ? json(*s.label) : json(nullptr)},
                     {"target", s.target},
                     {"distance", s.distance},
                     {"direction", checker::direction_name(s.direction)}});
  return {{"pass", rep.pass}, {"regions", std::move(regions)},
          {"sends", std::move(sends)}};
}

json footprint_json(const agg::FootprintSummary& fp, const Names& nm) {
  if (fp.mode == agg::FootprintSummary::Mode::ConcreteOnly)
    return {{"mode", "concrete-only"}, {"checked_up_to", fp.concrete_bound}};
  json arrays = json::object();
  for (const auto& [array, segs] : fp.arrays) {
    json list = json::array();
    for (const auto& s : segs)
      list.push_back({{"from", aff_str(s.from, nm.iter, nm.bound)},
                      {"to", aff_str(s.to, nm.iter, nm.bound)},
                      {"total", s.total.str()}});
    arrays[array] = std::move(list);
  }
  return {{"mode", "symbolic"}, {"valid_from", fp.valid_from},
          {"arrays", std::move(arrays)}};
}

json verdict_json(const classify::Verdict& v) {
  json evidence = json::array();
  for (const auto& s : v.evidence)
    evidence.push_back({{"site", s.site},
                        {"target", s.target},
                        {"distance", s.distance},
                        {"direction", checker::direction_name(s.direction)}});
  json out = {{"kind", classify::kind_name(v.kind)},
              {"pragma", v.suggested_pragma},
              {"evidence", std::move(evidence)}};
  if (v.failure) out["failure"] = diag_json(*v.failure);
  return out;
}

json dep_json(const oracle::DependenceRecord& d) {
  return {{"src", d.src},
          {"sink", d.sink},
          {"kind", oracle::dep_kind_name(d.kind)},
          {"distance", d.distance},
          {"array", d.array},
          {"direction", checker::direction_name(d.direction)}};
}

json replay_json(const oracle::EquivalenceReport& r) {
  json races = json::array();
  for (const auto& rc : r.races)
    races.push_back({{"stmt_a", rc.stmt_a},
                     {"iter_a", rc.iter_a},
                     {"stmt_b", rc.stmt_b},
                     {"iter_b", rc.iter_b},
                     {"cell", rc.cell}});
  return {{"trials", r.trials_run},
          {"all_equal", r.all_equal},
          {"mismatched_trials", r.mismatched_trials},
          {"races", std::move(races)},
          {"race_count", r.race_count},
          {"exhaustive", r.exhaustive},
          {"exhaustive_orders", r.exhaustive_orders},
          {"exhaustive_equal", r.exhaustive_equal}};
}

json oracle_json(const oracle::OracleReport& rep) {
  json per_n = json::array();
  for (const auto& p : rep.per_n) {
    json recs = json::array();
    for (const auto& d : p.records) recs.push_back(dep_json(d));
    per_n.push_back({{"n", p.n},
                     {"stable_across_seeds", p.stable_across_seeds},
                     {"records", std::move(recs)},
                     {"replay", replay_json(p.replay)}});
  }
  json observed = json::array();
  for (const auto& d : rep.observed) observed.push_back(dep_json(d));
  json out = {{"applicable", rep.applicable},
              {"agree", rep.agree},
              {"rule", rep.rule}};
  if (!rep.counterexample.empty()) out["counterexample"] = rep.counterexample;
  out["observed"] = std::move(observed);
  out["per_n"] = std::move(per_n);
  return out;
}

void emit(const json& report, const Options& opt) {
  std::string text = opt.compact ? report.dump() : report.dump(2);
  text += "\n";
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) fail(Code::IoError, "cannot write " + opt.out);
  out << text;
}

void summary_line(const Options& opt, bool ok, const std::string& text) {
  const char* green = opt.color ? "\x1b[32m" : "";
  const char* red = opt.color ? "\x1b[31m" : "";
  const char* reset = opt.color ? "\x1b[0m" : "";
  std::cerr << opt.path << ": " << (ok ? green : red) << (ok ? "PASS" : "FAIL")
            << reset << " " << text << "\n";
}

// Shared front half: parse + validate, reporting input errors as exit 2.
int load_or_report(const char* command, const Options& opt,
                   frontend::ValidatedProgram& vp, json& report) {
  report = report_skeleton(command, opt);
  try {
    vp = frontend::load_program(read_file(opt.path));
  } catch (const DiagError& e) {
    report["status"] = "error";
    report["diagnostics"].push_back(diag_json(e.diag()));
    emit(report, opt);
    summary_line(opt, false, std::string("(") + code_name(e.diag().code) + ": " +
                                 e.diag().message + ")");
    return 2;
  }
  return 0;
}

json balance_json(const frontend::ValidatedProgram& vp, const Options& opt,
                  const Names& nm) {
  try {
    auto bal = agg::check_balance(vp, opt.assume_bound);
    return {{"preserving", bal.preserving},
            {"differences", bal.differences},
            {"requires", footprint_json(bal.requires_fp, nm)},
            {"ensures", footprint_json(bal.ensures_fp, nm)}};
  } catch (const DiagError& e) {
    return {{"preserving", false}, {"error", diag_json(e.diag())}};
  }
}

int run_verify(const char* command, const Options& opt, bool with_footprint) {
  frontend::ValidatedProgram vp;
  json report;
  if (int rc = load_or_report(command, opt, vp, report)) return rc;
  Names nm = names_of(vp);

  auto check = checker::check_iteration(vp);
  auto verdict = classify::classify(vp, check);

  report["status"] = check.pass ? "pass" : "fail";
  if (!check.pass && check.primary)
    report["diagnostics"].push_back(diag_json(*check.primary));
  report["check"] = check_json(vp, check);
  if (with_footprint) report["balance"] = balance_json(vp, opt, nm);
  report["verdict"] = verdict_json(verdict);
  emit(report, opt);

  if (check.pass) {
    summary_line(opt, true,
                 std::string("(") + classify::kind_name(verdict.kind) +
                     ", pragma " + verdict.suggested_pragma + ")");
    return 0;
  }
  std::string why = check.primary ? std::string(code_name(check.primary->code)) +
                                        ": " + check.primary->message
                                  : "verification failed";
  summary_line(opt, false, "(" + why + ")");
  return 1;
}

}  // namespace

int cmd_verify(const Options& opt) { return run_verify("verify", opt, true); }

int cmd_classify(const Options& opt) {
  return run_verify("classify", opt, false);
}

int cmd_encode(const Options& opt) {
  frontend::ValidatedProgram vp;
  json report;
  if (int rc = load_or_report("encode", opt, vp, report)) return rc;

  auto enc = encode::encode(vp);
  std::string text = encode::render(enc);

  std::string out_path = opt.out;
  if (out_path.empty()) {
    out_path = opt.path;
    if (auto dot = out_path.rfind('.'); dot != std::string::npos)
      out_path.resize(dot);
    out_path += ".obl";
  }
  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) fail(Code::IoError, "cannot write " + out_path);
    out << text;
  }

  json procs = json::array();
  for (const auto& p : enc.procedures) procs.push_back(p.name);
  report["output"] = out_path;
  report["procedures"] = std::move(procs);
  // The report itself goes to stdout; --out already names the .obl file.
  Options stdout_opt = opt;
  stdout_opt.out.clear();
  emit(report, stdout_opt);
  summary_line(opt, true, "(wrote " + out_path + ")");
  return 0;
}

int cmd_oracle(const Options& opt) {
  frontend::ValidatedProgram vp;
  json report;
  if (int rc = load_or_report("oracle", opt, vp, report)) return rc;

  std::vector<uint64_t> seeds = {opt.seed, opt.seed + 1, opt.seed + 2};
  oracle::OracleReport orep;
  try {
    orep = oracle::cross_validate(vp, opt.n_set, seeds, opt.trials);
  } catch (const DiagError& e) {
    report["status"] = "error";
    report["diagnostics"].push_back(diag_json(e.diag()));
    emit(report, opt);
    summary_line(opt, false, std::string("(") + code_name(e.diag().code) +
                                 ": " + e.diag().message + ")");
    return 2;
  }

  bool replay_ok = true;
  for (const auto& p : orep.per_n) {
    if (!p.replay.all_equal || p.replay.race_count > 0) replay_ok = false;
    if (p.replay.exhaustive && !p.replay.exhaustive_equal) replay_ok = false;
  }
  bool ok = orep.applicable && orep.agree && replay_ok;

  report["status"] = ok ? "pass" : "fail";
  report["verdict"] = verdict_json(orep.verdict);
  report["oracle"] = oracle_json(orep);
  emit(report, opt);

  std::string text = ok ? "(verdict corroborated)"
                        : orep.applicable
                              ? (orep.agree ? "(replay found races or mismatches)"
                                            : "(" + orep.rule + ")")
                              : "(program did not verify)";
  summary_line(opt, ok, text);
  return ok ? 0 : 1;
}

}  // namespace loopver::cli
