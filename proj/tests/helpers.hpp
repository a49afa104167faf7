#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "loopver/diag.hpp"

inline std::string corpus_path(const std::string& name) {
  return std::string(CORPUS_DIR) + "/" + name;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string listing_source(int k) {
  return read_text(corpus_path("listing" + std::to_string(k) + ".loop"));
}

// Runs f, expecting a DiagError; nullopt when none was thrown.
template <typename F>
std::optional<loopver::Diagnostic> diag_of(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const loopver::DiagError& e) {
    return e.diag();
  }
  return std::nullopt;
}

inline std::string replace_once(std::string s, const std::string& from,
                                const std::string& to) {
  auto p = s.find(from);
  if (p != std::string::npos) s.replace(p, from.size(), to);
  return s;
}

inline std::string erase_line_containing(const std::string& s,
                                         const std::string& needle) {
  std::istringstream in(s);
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.find(needle) != std::string::npos) continue;
    out += line;
    out += '\n';
  }
  return out;
}

inline std::string strip_ws(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out += c;
  return out;
}

// Mutants used across the checker, CLI and acceptance tests. Each is a
// corpus listing with one fault injected.
inline std::string mutant_send_deleted() {
  return erase_line_containing(listing_source(2), "send perm");
}

inline std::string mutant_zero_distance() {
  return replace_once(listing_source(2), "S2,1;", "S2,0;");
}

inline std::string mutant_doubled_atom() {
  return replace_once(listing_source(1), "requires perm(a[i],1)",
                      "requires perm(a[i],1) ** perm(a[i],1)");
}
