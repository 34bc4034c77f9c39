#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crysect {

// Exact rational on __int128, reduced and sign-normalised (den > 0).  Used for
// local densities and counting identities; magnitudes stay far below overflow
// for the supported lattice sizes, but products are checked anyway.
struct Rat {
  __int128 num = 0;
  __int128 den = 1;

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(__int128 n, __int128 d);

  static __int128 gcd(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  Rat operator+(const Rat& o) const { return Rat(num * o.den + o.num * den, den * o.den); }
  Rat operator-(const Rat& o) const { return Rat(num * o.den - o.num * den, den * o.den); }
  Rat operator*(const Rat& o) const { return Rat(num * o.num, den * o.den); }
  Rat operator/(const Rat& o) const {
    if (o.num == 0) throw std::domain_error("rational division by zero");
    return Rat(num * o.den, den * o.num);
  }
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rat& o) const { return num * o.den < o.num * den; }
  bool operator<=(const Rat& o) const { return num * o.den <= o.num * den; }

  double to_double() const { return (double)num / (double)den; }
  std::string str() const;
};

inline Rat::Rat(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num = n;
  den = d;
}

inline std::string i128_str(__int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? (unsigned __int128)(-v) : (unsigned __int128)v;
  std::string s;
  while (u) {
    s.insert(s.begin(), char('0' + (int)(u % 10)));
    u /= 10;
  }
  return neg ? "-" + s : s;
}

inline std::string Rat::str() const {
  return i128_str(num) + "/" + i128_str(den);
}

}  // namespace crysect
