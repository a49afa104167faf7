#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "loopver/diag.hpp"

namespace loopver::resources {

// Exact non-negative rational, stored reduced with positive denominator.
// Permission amounts live in [0,1]; the type itself only requires >= 0.
class Fraction {
 public:
  constexpr Fraction() : num_(0), den_(1) {}

  Fraction(long long num, long long den) {
    if (den <= 0) fail(Code::InvalidFraction, "denominator must be positive");
    if (num < 0) fail(Code::InvalidFraction, "negative permission amount");
    long long g = std::gcd(num, den);
    if (g == 0) g = 1;
    num_ = num / g;
    den_ = den / g;
  }

  static Fraction zero() { return Fraction(); }
  static Fraction one() { return Fraction(1, 1); }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // "num/den", always with the slash so report values are uniform.
  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  long long num_;
  long long den_;

  friend Fraction frac_add(const Fraction&, const Fraction&);
  friend std::optional<Fraction> frac_sub(const Fraction&, const Fraction&);
};

namespace detail {
inline long long narrow_ll(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN)
    fail(Code::ArithmeticOverflow, "fraction arithmetic overflow");
  return static_cast<long long>(v);
}
}  // namespace detail

inline Fraction frac_add(const Fraction& a, const Fraction& b) {
  __int128 num = static_cast<__int128>(a.num_) * b.den_ +
                 static_cast<__int128>(b.num_) * a.den_;
  __int128 den = static_cast<__int128>(a.den_) * b.den_;
  __int128 g = 1;
  {
    __int128 x = num < 0 ? -num : num, y = den;
    while (y) { __int128 t = x % y; x = y; y = t; }
    g = x == 0 ? 1 : x;
  }
  return Fraction(detail::narrow_ll(num / g), detail::narrow_ll(den / g));
}

// nullopt when the result would be negative.
inline std::optional<Fraction> frac_sub(const Fraction& a, const Fraction& b) {
  if (a < b) return std::nullopt;
  __int128 num = static_cast<__int128>(a.num_) * b.den_ -
                 static_cast<__int128>(b.num_) * a.den_;
  __int128 den = static_cast<__int128>(a.den_) * b.den_;
  __int128 g = 1;
  {
    __int128 x = num, y = den;
    while (y) { __int128 t = x % y; x = y; y = t; }
    g = x == 0 ? 1 : x;
  }
  return Fraction(detail::narrow_ll(num / g), detail::narrow_ll(den / g));
}

inline Fraction frac_scale(const Fraction& a, long long k) {
  if (k < 0) fail(Code::InvalidFraction, "negative scale");
  __int128 num = static_cast<__int128>(a.num()) * k;
  return Fraction(detail::narrow_ll(num), a.den());
}

}  // namespace loopver::resources
