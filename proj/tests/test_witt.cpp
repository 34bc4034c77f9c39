#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crysect/witt.hpp"

#include <random>

using namespace crysect;

// Independent multiplicative-lift oracle: iterate x -> x^p until fixed.
static uint64_t lift_by_iteration(uint64_t r, uint64_t p, uint64_t pn) {
  uint64_t x = r % pn;
  for (int guard = 0; guard < 256; ++guard) {
    uint64_t y = 1;
    for (uint64_t e = 0; e < p; ++e) y = (uint64_t)((unsigned __int128)y * x % pn);
    if (y == x) return x;
    x = y;
  }
  return x;
}

TEST_CASE("ring construction validates arguments") {
  CHECK_THROWS_AS(WittRing(4, 2, 3), ConfigError);   // composite p
  CHECK_THROWS_AS(WittRing(2, 2, 1), ConfigError);   // even p
  CHECK_THROWS_AS(WittRing(3, 0, 2), ConfigError);   // zero precision
  CHECK_THROWS_AS(WittRing(3, 2, 1), ConfigError);   // eps a square
  CHECK_THROWS_AS(WittRing(5, 2, 4), ConfigError);   // 4 = 2^2 mod 5
  CHECK_THROWS_AS(WittRing(3, 45, 2), ConfigError);  // 3^45 over 62 bits
  CHECK_NOTHROW(WittRing(3, 4, 2));
}

TEST_CASE("auto_eps picks the least nonresidue") {
  CHECK(WittRing::auto_eps(3) == 2);
  CHECK(WittRing::auto_eps(5) == 2);
  CHECK(WittRing::auto_eps(7) == 3);
  CHECK(WittRing::auto_eps(11) == 2);
  CHECK(WittRing::auto_eps(23) == 5);
}

TEST_CASE("multiplicative lift: unit digits are roots of x^p = x") {
  WittRing r32(3, 2, 2);
  CHECK(r32.teich(1) == 1);
  CHECK(r32.teich(2) == 8);  // -1 lifts to -1 = 9 - 1

  WittRing r53(5, 3, 2);
  uint64_t t = r53.teich(2);
  CHECK(t % 5 == 2);
  CHECK(r53.pow(t, 5) == t);
  CHECK(t == lift_by_iteration(2, 5, 125));

  WittRing r73(7, 3, 3);
  for (uint64_t u = 1; u < 7; ++u) {
    uint64_t tu = r73.teich(u);
    CHECK(tu % 7 == u);
    CHECK(r73.pow(tu, 7) == tu);
    CHECK(tu == lift_by_iteration(u, 7, 343));
  }
}

TEST_CASE("lift is multiplicative on residues") {
  for (uint32_t p : {3u, 5u, 7u}) {
    WittRing r(p, 3, WittRing::auto_eps(p));
    for (uint64_t u = 1; u < p; ++u)
      for (uint64_t v = 1; v < p; ++v)
        CHECK(r.mul(r.teich(u), r.teich(v)) == r.teich(u * v % p));
  }
}

TEST_CASE("p-valuation of plain residues") {
  WittRing r(3, 4, 2);
  CHECK(r.val(1) == 0);
  CHECK(r.val(9) == 2);
  CHECK(r.val(54) == 3);
  CHECK(r.val(0) == 4);  // divisible by the full modulus as stored
}

TEST_CASE("base-p digit round trip") {
  WittRing r(5, 3, 2);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    uint64_t v = rng() % r.modulus();
    auto d = r.base_digits(v);
    REQUIRE(d.size() == 3);
    for (uint32_t dk : d) CHECK(dk < 5);
    CHECK(r.from_base_digits(d) == v);
  }
  CHECK(r.base_digits(27) == std::vector<uint32_t>({2, 0, 1}));
}

TEST_CASE("ring axioms on random triples") {
  struct PN {
    uint32_t p, n;
  };
  for (PN pn : {PN{3, 4}, PN{5, 3}, PN{7, 3}}) {
    WittRing r(pn.p, pn.n, WittRing::auto_eps(pn.p));
    std::mt19937_64 rng(pn.p * 1000 + pn.n);
    auto rnd = [&] { return WittScalar(r, rng() % r.modulus(), rng() % r.modulus()); };
    WittScalar one = WittScalar::from_int(r, 1);
    WittScalar zero = WittScalar::from_int(r, 0);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      WittScalar a = rnd(), b = rnd(), c = rnd();
      if (!((a + b) + c == a + (b + c))) ++bad;
      if (!((a * b) * c == a * (b * c))) ++bad;
      if (!(a + b == b + a)) ++bad;
      if (!(a * b == b * a)) ++bad;
      if (!(a * (b + c) == a * b + a * c)) ++bad;
      if (!(a * one == a)) ++bad;
      if (!(a + zero == a)) ++bad;
      if (!(a - a == zero)) ++bad;
      if (!(a + (-a) == zero)) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("lambda squares to the lifted nonresidue") {
  for (uint32_t p : {3u, 5u, 7u}) {
    WittRing r(p, 3, WittRing::auto_eps(p));
    WittScalar l = WittScalar::lambda(r);
    WittScalar ll = l * l;
    CHECK(ll.a() == r.eps_lift());
    CHECK(ll.b() == 0);
    CHECK(r.eps_lift() % r.p() == r.eps());
  }
}

TEST_CASE("involution negates the lambda part") {
  WittRing r(3, 2, 2);
  WittScalar l = WittScalar::lambda(r);
  CHECK(l.frobenius() == -l);
  WittScalar s(r, 3, 2);
  WittScalar fs = s.frobenius();
  CHECK(fs.a() == 3);
  CHECK(fs.b() == r.neg(2));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    WittScalar x(r, rng() % r.modulus(), rng() % r.modulus());
    CHECK(x.frobenius().frobenius() == x);
  }
}

TEST_CASE("involution is a ring map") {
  WittRing r(5, 3, 2);
  std::mt19937_64 rng(13);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    WittScalar a(r, rng() % r.modulus(), rng() % r.modulus());
    WittScalar b(r, rng() % r.modulus(), rng() % r.modulus());
    if (!((a + b).frobenius() == a.frobenius() + b.frobenius())) ++bad;
    if (!((a * b).frobenius() == a.frobenius() * b.frobenius())) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("units and inverses") {
  WittRing r(3, 4, 2);
  CHECK(WittScalar(r, 1, 0).is_unit());
  CHECK(WittScalar(r, 0, 1).is_unit());
  CHECK(WittScalar(r, 3, 6).is_unit() == false);
  CHECK(WittScalar(r, 0, 0).is_unit() == false);
  CHECK(WittScalar(r, 3, 1).is_unit());

  std::mt19937_64 rng(17);
  WittScalar one = WittScalar::from_int(r, 1);
  int found = 0;
  while (found < 300) {
    WittScalar s(r, rng() % r.modulus(), rng() % r.modulus());
    if (!s.is_unit()) continue;
    ++found;
    CHECK(s * s.inverse() == one);
  }
  CHECK_THROWS(WittScalar(r, 3, 0).inverse());
}

TEST_CASE("two-coordinate valuation and exact division") {
  WittRing r(3, 4, 2);
  CHECK(WittScalar(r, 9, 9).p_valuation() == 2);
  CHECK(WittScalar(r, 1, 0).p_valuation() == 0);
  CHECK(WittScalar(r, 27, 3).p_valuation() == 1);
  CHECK(WittScalar(r, 0, 0).p_valuation() == 4);

  WittScalar s(r, 9, 18);
  WittScalar q = s.divexact_p();
  CHECK(q.a() == 3);
  CHECK(q.b() == 6);
  CHECK(q.mul_p_pow(1) == s);
  CHECK_THROWS(WittScalar(r, 1, 3).divexact_p());
}

TEST_CASE("power matches repeated product") {
  WittRing r(7, 3, 3);
  std::mt19937_64 rng(19);
  for (int i = 0; i < 50; ++i) {
    WittScalar s(r, rng() % r.modulus(), rng() % r.modulus());
    WittScalar acc = WittScalar::from_int(r, 1);
    for (int e = 0; e <= 6; ++e) {
      CHECK(s.pow(e) == acc);
      acc = acc * s;
    }
  }
}

TEST_CASE("full lift fixes x -> x^(p^2)") {
  WittRing r(3, 3, 2);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    WittScalar s(r, rng() % r.modulus(), rng() % r.modulus());
    if (!s.is_unit() && !s.is_zero()) continue;
    WittScalar t = teichmuller(s);
    CHECK(t.pow(9) == t);
    // same residue mod p
    CHECK(t.a() % 3 == s.a() % 3);
    CHECK(t.b() % 3 == s.b() % 3);
  }
}

TEST_CASE("digit expansion of a plain residue") {
  WittRing r(3, 4, 2);
  std::mt19937_64 rng(29);
  for (int i = 0; i < 100; ++i) {
    uint64_t v = rng() % r.modulus();
    auto dig = teichmuller_digits(r, v);
    REQUIRE(dig.size() == r.n());
    uint64_t acc = 0, pk = 1;
    for (size_t k = 0; k < dig.size(); ++k) {
      if (dig[k]) CHECK(r.pow(dig[k], 3) == dig[k]);  // each digit multiplicative
      acc = r.add(acc, r.mul(dig[k], pk));
      pk = r.mul(pk, 3);
    }
    CHECK(acc == v);
  }
}

TEST_CASE("truncate reduces both coordinates") {
  WittRing r(3, 4, 2);
  WittScalar s(r, 80, 55);
  WittScalar t = s.truncate(2);
  CHECK(t.a() == 80 % 9);
  CHECK(t.b() == 55 % 9);
  CHECK(s.truncate(4) == s);
}
