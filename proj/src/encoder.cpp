#include "loopver/encoder.hpp"

#include <map>

#include "loopver/pretty.hpp"

namespace loopver::encode {

using frontend::ParamKind;
using frontend::Statement;
using resources::AffineExpr;
using resources::aff_str;

namespace {

std::string param_str(const frontend::Param& p) {
  return p.kind == ParamKind::IntArray ? "int " + p.name + "[]"
                                       : "int " + p.name;
}

std::string phi_str(const std::vector<resources::NormClause>& formula,
                    long long shift, const std::string& bound) {
  std::string out;
  for (const auto& cl : formula) {
    if (!out.empty()) out += " ** ";
    AffineExpr idx = resources::aff_shift_iter(cl.atom.cell.index, shift);
    out += "perm(" + cl.atom.cell.array + "[" + aff_str(idx, "i", bound) +
           "]," + cl.atom.frac.str() + ")";
  }
  return out;
}

std::string assign_str(const Statement& s) {
  std::string out;
  if (s.label) out += *s.label + ": ";
  out += s.array + "[" + frontend::pretty_arith(s.index) +
         "] = " + frontend::pretty_arith(s.rhs) + ";";
  return out;
}

}  // namespace

EncodedObligations encode(const frontend::ValidatedProgram& vp) {
  const std::string bound = vp.bound_param.empty() ? "N" : vp.bound_param;
  const std::string range = aff_str(vp.bounds.lo, "i", bound) +
                            " <= i && i < " +
                            aff_str(vp.bounds.hi, "i", bound);

  EncodedObligations enc;
  enc.is_iteration_def =
      "boolean is_iteration(int i) { return " + range + "; }";

  std::vector<std::string> args;
  for (const auto& p : vp.program.params) args.push_back(param_str(p));

  Procedure main;
  main.name = "loop_main";
  main.params = args;
  for (const auto& cl : vp.program.loop.requires_clauses)
    main.requires_lines.push_back("(\\forall* int i; " + range + "; " +
                                  frontend::pretty_clause(cl) + ")");
  for (const auto& cl : vp.program.loop.ensures_clauses)
    main.ensures_lines.push_back("(\\forall* int i; " + range + "; " +
                                 frontend::pretty_clause(cl) + ")");
  enc.procedures.push_back(std::move(main));

  Procedure body;
  body.name = "loop_body";
  body.has_body = true;
  body.params.push_back("int i");
  body.params.insert(body.params.end(), args.begin(), args.end());
  body.requires_lines.push_back("(" + range + ")");
  for (const auto& cl : vp.program.loop.requires_clauses)
    body.requires_lines.push_back(frontend::pretty_clause(cl));
  for (const auto& cl : vp.program.loop.ensures_clauses)
    body.ensures_lines.push_back(frontend::pretty_clause(cl));

  // recv_phi_k(i) goes immediately before the statement named by send k's
  // target label; the send itself becomes send_phi_k(i).
  std::map<size_t, std::vector<size_t>> recv_before;
  for (size_t k = 0; k < vp.send_sites.size(); ++k)
    recv_before[vp.body[vp.send_sites[k]].target_index].push_back(k);

  for (size_t idx = 0; idx < vp.program.loop.body.size(); ++idx) {
    const Statement& st = vp.program.loop.body[idx];
    if (auto it = recv_before.find(idx); it != recv_before.end())
      for (size_t k : it->second)
        body.body_lines.push_back("recv_phi_" + std::to_string(k) + "(i);");
    if (st.kind == Statement::Kind::Send) {
      size_t k = vp.body[idx].send_ordinal;
      body.body_lines.push_back("send_phi_" + std::to_string(k) + "(i);");
    } else {
      body.body_lines.push_back(assign_str(st));
    }
  }
  enc.procedures.push_back(std::move(body));

  for (size_t k = 0; k < vp.send_sites.size(); ++k) {
    const auto& send = vp.body[vp.send_sites[k]];
    const std::string ks = std::to_string(k);

    Procedure sp;
    sp.name = "send_phi_" + ks;
    sp.params.push_back("int i");
    sp.requires_lines.push_back(
        "is_iteration(" + aff_str({1, 0, send.distance}, "i", bound) +
        ") ==> " + phi_str(send.formula, 0, bound));
    enc.procedures.push_back(std::move(sp));

    Procedure rp;
    rp.name = "recv_phi_" + ks;
    rp.params.push_back("int i");
    rp.ensures_lines.push_back(
        "is_iteration(" + aff_str({1, 0, -send.distance}, "i", bound) +
        ") ==> " + phi_str(send.formula, -send.distance, bound));
    enc.procedures.push_back(std::move(rp));
  }
  return enc;
}

std::string render(const EncodedObligations& enc) {
  std::string out = enc.is_iteration_def + "\n";
  for (const auto& p : enc.procedures) {
    out += "\n";
    if (!p.requires_lines.empty() || !p.ensures_lines.empty()) {
      out += "/*@";
      bool first = true;
      for (const auto& l : p.requires_lines) {
        out += first ? " " : "\n    ";
        out += "requires " + l + ";";
        first = false;
      }
      for (const auto& l : p.ensures_lines) {
        out += first ? " " : "\n    ";
        out += "ensures  " + l + ";";
        first = false;
      }
      out += " @*/\n";
    }
    out += "void " + p.name + "(";
    for (size_t k = 0; k < p.params.size(); ++k) {
      if (k) out += ", ";
      out += p.params[k];
    }
    out += ")";
    if (p.has_body) {
      out += " {\n";
      for (const auto& l : p.body_lines) out += "    " + l + "\n";
      out += "}\n";
    } else {
      out += ";\n";
    }
  }
  return out;
}

}  // namespace loopver::encode
