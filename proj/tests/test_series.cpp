#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crysect/series.hpp"

#include <random>

using namespace crysect;

namespace {

TruncatedSeries spow(const TruncatedSeries& s, uint32_t e) {
  TruncatedSeries acc =
      TruncatedSeries::constant(s.ring(), s.deg_bound(), WittScalar::from_int(s.ring(), 1));
  for (uint32_t i = 0; i < e; ++i) acc = acc * s;
  return acc;
}

bool prefix_equal(const UniSeries& u, const UniSeries& v) {
  uint32_t upto = std::min(u.valid_to(), v.valid_to());
  for (uint32_t i = 0; i < upto; ++i)
    if (!(u[i] == v[i])) return false;
  return true;
}

TruncatedSeries random_series(const WittRing& r, uint32_t D, uint32_t max_deg,
                              std::mt19937_64& rng) {
  TruncatedSeries s(r, D);
  int nterms = 1 + (int)(rng() % 4);
  for (int t = 0; t < nterms; ++t) {
    Expo e{(uint32_t)(rng() % (max_deg + 1)), 0, 0};
    e.y = (uint32_t)(rng() % (max_deg + 1 - e.total()));
    e.z = (uint32_t)(rng() % (max_deg + 1 - e.total()));
    s.set_term(e, WittScalar(r, rng() % r.modulus(), rng() % r.modulus()));
  }
  return s;
}

}  // namespace

TEST_CASE("variables, constants and support") {
  WittRing r(3, 2, 2);
  TruncatedSeries x = TruncatedSeries::variable(r, 8, 0);
  TruncatedSeries y = TruncatedSeries::variable(r, 8, 1);
  TruncatedSeries z = TruncatedSeries::variable(r, 8, 2);

  TruncatedSeries s = x * x * y + z;
  auto sup = s.support();
  REQUIRE(sup.size() == 2);
  CHECK(((sup[0].x == 0 && sup[0].y == 0 && sup[0].z == 1) ||
         (sup[1].x == 0 && sup[1].y == 0 && sup[1].z == 1)));
  CHECK(((sup[0].x == 2 && sup[0].y == 1 && sup[0].z == 0) ||
         (sup[1].x == 2 && sup[1].y == 1 && sup[1].z == 0)));

  CHECK(TruncatedSeries::zero(r, 8).support().empty());
  CHECK(TruncatedSeries::zero(r, 8).is_zero());
}

TEST_CASE("degree bound truncates products") {
  WittRing r(3, 2, 2);
  TruncatedSeries x = TruncatedSeries::variable(r, 4, 0);
  TruncatedSeries s = spow(x, 3);  // x^3 still inside
  CHECK(s.coeff(Expo{3, 0, 0}).has_value());
  TruncatedSeries t = s * x;  // x^4 out of range
  CHECK(t.is_zero());
}

TEST_CASE("coefficient map semantics") {
  WittRing r(5, 2, 2);
  TruncatedSeries s(r, 6);
  s.set_term(Expo{1, 2, 0}, WittScalar(r, 7, 1));
  s.set_term(Expo{1, 2, 0}, WittScalar(r, 3, 0));  // overwrite
  auto c = s.coeff(Expo{1, 2, 0});
  REQUIRE(c.has_value());
  CHECK(c->a() == 3);
  CHECK(!s.coeff(Expo{0, 0, 1}).has_value());
}

TEST_CASE("semilinear map on a binomial") {
  WittRing r(3, 2, 2);
  TruncatedSeries x = TruncatedSeries::variable(r, 8, 0);
  TruncatedSeries y = TruncatedSeries::variable(r, 8, 1);
  TruncatedSeries s = x + y.scaled(WittScalar::lambda(r));
  TruncatedSeries fs = s.sigma();
  REQUIRE(fs.support().size() == 2);
  auto cx = fs.coeff(Expo{3, 0, 0});
  auto cy = fs.coeff(Expo{0, 3, 0});
  REQUIRE(cx.has_value());
  REQUIRE(cy.has_value());
  CHECK(*cx == WittScalar::from_int(r, 1));
  CHECK(*cy == -WittScalar::lambda(r));
}

TEST_CASE("semilinear map fixes constants and iterates on exponents") {
  WittRing r(3, 3, 2);
  TruncatedSeries one = TruncatedSeries::constant(r, 12, WittScalar::from_int(r, 1));
  CHECK(one.sigma().equals(one));

  TruncatedSeries x = TruncatedSeries::variable(r, 12, 0);
  TruncatedSeries xs = x.sigma_pow(2);
  auto sup = xs.support();
  REQUIRE(sup.size() == 1);
  CHECK(sup[0].x == 9);
  CHECK(sup[0].y == 0);
  CHECK(sup[0].z == 0);
}

TEST_CASE("semilinear map is a ring map when nothing truncates") {
  WittRing r(3, 3, 2);
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    TruncatedSeries f = random_series(r, 8, 1, rng);
    TruncatedSeries g = random_series(r, 8, 1, rng);
    TruncatedSeries lhs_m = (f * g).sigma();
    CHECK(!lhs_m.trunc_loss());
    CHECK(lhs_m.equals(f.sigma() * g.sigma()));
    CHECK((f + g).sigma().equals(f.sigma() + g.sigma()));
  }
}

TEST_CASE("p shifts track the denominator and cancel") {
  WittRing r(3, 3, 2);
  TruncatedSeries x = TruncatedSeries::variable(r, 6, 0);
  TruncatedSeries s = x.scaled(WittScalar::from_int(r, 3)).p_shift_down(1);
  CHECK(s.pdenom() == 0);  // 3x/3 normalises back to x
  CHECK(s.equals(x));

  TruncatedSeries d = x.p_shift_down(2);
  CHECK(d.pdenom() == 2);
  CHECK(d.p_shift_up(2).equals(x));
}

TEST_CASE("after normalisation a nonzero series has a unit coefficient") {
  WittRing r(3, 3, 2);
  std::mt19937_64 rng(43);
  for (int i = 0; i < 100; ++i) {
    TruncatedSeries f = random_series(r, 8, 2, rng);
    TruncatedSeries g = f.p_shift_down(1 + (uint32_t)(rng() % 2));
    if (g.is_zero()) continue;
    if (g.pdenom() == 0) continue;  // denominator fully cancelled
    bool unit = false;
    for (const auto& [k, c] : g.terms()) unit |= c.is_unit();
    CHECK(unit);
  }
}

TEST_CASE("reduction mod p") {
  WittRing r(3, 2, 2);
  TruncatedSeries x = TruncatedSeries::variable(r, 6, 0);
  TruncatedSeries s = x.scaled(WittScalar(r, 4, 0)) + spow(x, 2).scaled(WittScalar(r, 3, 0));
  TruncatedSeries m = s.reduced_mod_p();
  CHECK(m.n_eff() == 1);
  CHECK(m.equals(x));
}

TEST_CASE("univariate valuation reports exact or lower bound") {
  WittRing r(3, 2, 2);
  UniSeries u(r, 16);
  u.set(3, WittScalar::from_int(r, 1));
  u.set(5, WittScalar::from_int(r, 1));
  CHECK(u.t_valuation() == TVal::exact(3));

  UniSeries v(r, 16);
  v.set(2, WittScalar::from_int(r, 3));  // vanishes mod p
  TVal tv = v.t_valuation();
  CHECK(tv.at_least);
  CHECK(tv.v == 16);

  CHECK(TVal::exact(3).str() == "3");
  CHECK(TVal::lower_bound(16).str() == ">=16");
}

TEST_CASE("univariate product clamps the reliable prefix") {
  WittRing r(3, 1, 2);
  UniSeries u(r, 8);
  u.set(2, WittScalar::from_int(r, 1));
  UniSeries v(r, 8);
  v.set(1, WittScalar::from_int(r, 2));
  UniSeries w = u * v;
  CHECK(w[3] == WittScalar::from_int(r, 2));
  CHECK(w.low_index() == 3);
  // contributions above index 8 could have come from unknown tails
  CHECK(w.valid_to() >= 8 - 1);
}

TEST_CASE("mod-p power map on one variable") {
  WittRing r(3, 1, 2);
  UniSeries u(r, 32);
  u.set(1, WittScalar::from_int(r, 2));
  u.set(2, WittScalar(r, 0, 1));
  UniSeries f = u.frobenius_map();
  CHECK(f[3] == WittScalar::from_int(r, 2));   // 2^3 = 8 = 2 mod 3
  CHECK(f[6] == WittScalar(r, 0, 2));          // lambda^3 = eps*lambda = 2L
  CHECK(f[1].is_zero());
}

TEST_CASE("substitution: product of coordinates") {
  WittRing r(3, 2, 2);
  TruncatedSeries x = TruncatedSeries::variable(r, 6, 0);
  TruncatedSeries y = TruncatedSeries::variable(r, 6, 1);
  UniSeries T(r, 8), Z(r, 8);
  T.set(1, WittScalar::from_int(r, 1));
  UniSeries out = substitute_curve(x * y, T, T, Z);
  CHECK(out.low_index() == 2);
  CHECK(out[2] == WittScalar::from_int(r, 1));
}

TEST_CASE("substitution kills the cone germ along its ruling line") {
  WittRing r(3, 2, 2);
  TruncatedSeries x = TruncatedSeries::variable(r, 6, 0);
  TruncatedSeries y = TruncatedSeries::variable(r, 6, 1);
  TruncatedSeries z = TruncatedSeries::variable(r, 6, 2);
  WittScalar l = WittScalar::lambda(r);
  WittScalar inv4e = (WittScalar::from_int(r, 4) * WittScalar(r, r.eps_lift(), 0)).inverse();
  TruncatedSeries germ = x * y + (z * z).scaled(inv4e);

  UniSeries X(r, 8), Y(r, 8), Z(r, 8);
  X.set(1, l.inverse());
  Y.set(1, -l);
  Z.set(1, WittScalar::from_int(r, 2) * l);
  UniSeries out = substitute_curve(germ, X, Y, Z);
  for (uint32_t i = 0; i < out.valid_to(); ++i) CHECK(out[i].is_zero());
}

TEST_CASE("substitution kills the quartic germ along the line mod p") {
  WittRing r(3, 1, 2);
  uint32_t D = 6;
  TruncatedSeries x = TruncatedSeries::variable(r, D, 0);
  TruncatedSeries y = TruncatedSeries::variable(r, D, 1);
  TruncatedSeries z = TruncatedSeries::variable(r, D, 2);
  WittScalar inv2e = (WittScalar::from_int(r, 2) * WittScalar(r, r.eps_lift(), 0)).inverse();
  TruncatedSeries quartic =
      x * spow(y, 3) + spow(x, 3) * y + spow(z, 4).scaled(inv2e);

  WittScalar l = WittScalar::lambda(r);
  UniSeries X(r, 12), Y(r, 12), Z(r, 12);
  X.set(1, l.inverse());
  Y.set(1, -l);
  Z.set(1, WittScalar::from_int(r, 2) * l);
  UniSeries out = substitute_curve(quartic, X, Y, Z);
  for (uint32_t i = 0; i < out.valid_to(); ++i) CHECK(out[i].is_zero());
}

TEST_CASE("substitution along a perturbed curve meets the germ at order three") {
  WittRing r(3, 2, 2);
  TruncatedSeries x = TruncatedSeries::variable(r, 6, 0);
  TruncatedSeries y = TruncatedSeries::variable(r, 6, 1);
  TruncatedSeries z = TruncatedSeries::variable(r, 6, 2);
  WittScalar inv4e = (WittScalar::from_int(r, 4) * WittScalar(r, r.eps_lift(), 0)).inverse();
  TruncatedSeries germ = x * y + (z * z).scaled(inv4e);

  WittScalar l = WittScalar::lambda(r);
  UniSeries X(r, 16), Y(r, 16), Z(r, 16);
  X.set(1, WittScalar::from_int(r, 1));
  Y.set(1, WittScalar::from_int(r, -1));
  Y.set(2, WittScalar::from_int(r, 1));
  Z.set(1, WittScalar::from_int(r, 2) * l);
  UniSeries out = substitute_curve(germ, X, Y, Z);
  CHECK(out.t_valuation() == TVal::exact(3));
  CHECK(out[3] == WittScalar::from_int(r, 1));
}

TEST_CASE("substitution is a ring map on the reliable prefix") {
  WittRing r(3, 1, 2);
  std::mt19937_64 rng(47);
  for (int i = 0; i < 100; ++i) {
    TruncatedSeries f = random_series(r, 6, 2, rng);
    TruncatedSeries g = random_series(r, 6, 2, rng);
    UniSeries X(r, 24), Y(r, 24), Z(r, 24);
    for (uint32_t k = 1; k < 4; ++k) {
      X.set(k, WittScalar(r, rng() % 3, rng() % 3));
      Y.set(k, WittScalar(r, rng() % 3, rng() % 3));
      Z.set(k, WittScalar(r, rng() % 3, rng() % 3));
    }
    UniSeries fs = substitute_curve(f, X, Y, Z);
    UniSeries gs = substitute_curve(g, X, Y, Z);
    CHECK(prefix_equal(substitute_curve(f + g, X, Y, Z), fs + gs));
    CHECK(prefix_equal(substitute_curve(f * g, X, Y, Z), fs * gs));
  }
}

TEST_CASE("matrix identity and product") {
  WittRing r(3, 2, 2);
  SeriesMat id = SeriesMat::identity(r, 6, 3);
  SeriesMat m(r, 6, 3, 3);
  std::mt19937_64 rng(53);
  for (uint32_t i = 0; i < 3; ++i)
    for (uint32_t j = 0; j < 3; ++j) m.at(i, j) = random_series(r, 6, 2, rng);
  CHECK((id * m).equals(m));
  CHECK((m * id).equals(m));

  SeriesMat a(r, 6, 2, 2), b(r, 6, 2, 2);
  TruncatedSeries x = TruncatedSeries::variable(r, 6, 0);
  TruncatedSeries y = TruncatedSeries::variable(r, 6, 1);
  a.at(0, 0) = x;
  a.at(0, 1) = y;
  b.at(1, 0) = x;
  SeriesMat ab = a * b;
  CHECK(ab.at(0, 0).equals(y * x));
  CHECK(ab.at(1, 1).is_zero());
}

TEST_CASE("matrix semilinear action matches entrywise map") {
  WittRing r(3, 2, 2);
  std::mt19937_64 rng(59);
  SeriesMat m(r, 10, 2, 3);
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 3; ++j) m.at(i, j) = random_series(r, 10, 2, rng);
  SeriesMat ms = m.sigma();
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 3; ++j) CHECK(ms.at(i, j).equals(m.at(i, j).sigma()));
}
