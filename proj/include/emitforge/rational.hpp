#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace emitforge {

// Exact rational arithmetic for gate times. All schedule math stays on the
// emission grid (multiples of 0.1 tau by default), so magnitudes are tiny;
// 128-bit intermediates guard the reductions anyway.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  constexpr Rat(std::int64_t n) : num_(n), den_(1) {}
  Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return from128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                   (__int128)a.den_ * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return from128((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                   (__int128)a.den_ * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    return from128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
  }
  Rat operator-() const { return Rat(-num_, den_); }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  double to_double() const { return (double)num_ / (double)den_; }

  // Serialized form is always "num/den", normalized, den >= 1.
  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  static Rat parse(const std::string& s);
  // Parses decimal literals like "0.1" or "4" into exact rationals.
  static Rat parse_decimal(const std::string& s);

 private:
  static Rat from128(__int128 n, __int128 d) {
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Rat: overflow");
    Rat r;
    r.num_ = (std::int64_t)n;
    r.den_ = (std::int64_t)d;
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b) { __int128 t = a % b; a = b; b = t; }
    return a ? a : 1;
  }
  void normalize() {
    if (den_ == 0) throw std::domain_error("Rat: zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline Rat Rat::parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos)
    throw std::invalid_argument("Rat: expected num/den, got '" + s + "'");
  std::int64_t n = std::stoll(s.substr(0, slash));
  std::int64_t d = std::stoll(s.substr(slash + 1));
  return Rat(n, d);
}

inline Rat Rat::parse_decimal(const std::string& s) {
  if (s.find('/') != std::string::npos) return parse(s);
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(std::stoll(s));
  std::string whole = s.substr(0, dot);
  std::string frac = s.substr(dot + 1);
  if (frac.size() > 15) frac = frac.substr(0, 15);
  std::int64_t den = 1;
  for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  bool neg = !whole.empty() && whole[0] == '-';
  std::int64_t w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
  std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
  if (neg) return Rat(w * den - f, den);
  return Rat(w * den + f, den);
}

}  // namespace emitforge
