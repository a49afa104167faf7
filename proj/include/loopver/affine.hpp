#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "loopver/diag.hpp"

namespace loopver::resources {

// ci*i + cn*N + c over the iteration variable and the symbolic bound
// parameter. All index, bound and guard arithmetic is normalized to this
// shape; anything else is rejected during validation.
struct AffineExpr {
  long long ci = 0;
  long long cn = 0;
  long long c = 0;

  friend bool operator==(const AffineExpr&, const AffineExpr&) = default;
  friend auto operator<=>(const AffineExpr&, const AffineExpr&) = default;

  bool is_constant() const { return ci == 0 && cn == 0; }
  bool is_zero() const { return ci == 0 && cn == 0 && c == 0; }

  long long eval(long long i, long long n) const {
    __int128 v = static_cast<__int128>(ci) * i +
                 static_cast<__int128>(cn) * n + c;
    if (v > INT64_MAX || v < INT64_MIN)
      fail(Code::ArithmeticOverflow, "affine evaluation overflow");
    return static_cast<long long>(v);
  }
};

namespace detail {
inline long long aff_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r))
    fail(Code::ArithmeticOverflow, "affine coefficient overflow");
  return r;
}
inline long long aff_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r))
    fail(Code::ArithmeticOverflow, "affine coefficient overflow");
  return r;
}
}  // namespace detail

inline AffineExpr aff_add(const AffineExpr& a, const AffineExpr& b) {
  return {detail::aff_add(a.ci, b.ci), detail::aff_add(a.cn, b.cn),
          detail::aff_add(a.c, b.c)};
}
inline AffineExpr aff_neg(const AffineExpr& a) {
  return {detail::aff_mul(a.ci, -1), detail::aff_mul(a.cn, -1),
          detail::aff_mul(a.c, -1)};
}
inline AffineExpr aff_sub(const AffineExpr& a, const AffineExpr& b) {
  return aff_add(a, aff_neg(b));
}
inline AffineExpr aff_scale(const AffineExpr& a, long long k) {
  return {detail::aff_mul(a.ci, k), detail::aff_mul(a.cn, k),
          detail::aff_mul(a.c, k)};
}
inline AffineExpr aff_const(long long k) { return {0, 0, k}; }

// Substitute i := i + d.
inline AffineExpr aff_shift_iter(const AffineExpr& a, long long d) {
  return {a.ci, a.cn, detail::aff_add(a.c, detail::aff_mul(a.ci, d))};
}

// Substitute i := e where e has no i term.
inline AffineExpr aff_subst_iter(const AffineExpr& a, const AffineExpr& e) {
  if (e.ci != 0) fail(Code::Internal, "substitution needs an i-free expr");
  return {0, detail::aff_add(a.cn, detail::aff_mul(a.ci, e.cn)),
          detail::aff_add(a.c, detail::aff_mul(a.ci, e.c))};
}

// Compact rendering: "i-1", "N+1", "2", "-i+N".
inline std::string aff_str(const AffineExpr& a, const std::string& iter,
                           const std::string& bound) {
  std::string out;
  auto term = [&out](long long coef, const std::string& var) {
    if (coef == 0) return;
    if (out.empty()) {
      if (coef == -1) out += "-";
      else if (coef != 1) out += std::to_string(coef) + "*";
    } else {
      out += coef < 0 ? "-" : "+";
      long long mag = coef < 0 ? -coef : coef;
      if (mag != 1) out += std::to_string(mag) + "*";
    }
    out += var;
  };
  term(a.ci, iter);
  term(a.cn, bound);
  if (a.c != 0 || out.empty()) {
    if (out.empty()) out += std::to_string(a.c);
    else out += (a.c < 0 ? "-" : "+") + std::to_string(a.c < 0 ? -a.c : a.c);
  }
  return out;
}

}  // namespace loopver::resources
