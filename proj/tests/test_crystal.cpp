#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crysect/crystal.hpp"

#include <random>

using namespace crysect;

namespace {

TruncatedSeries spow(const TruncatedSeries& s, uint32_t e) {
  TruncatedSeries acc =
      TruncatedSeries::constant(s.ring(), s.deg_bound(), WittScalar::from_int(s.ring(), 1));
  for (uint32_t i = 0; i < e; ++i) acc = acc * s;
  return acc;
}

}  // namespace

TEST_CASE("generator series in explicit monomials") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 14);
  TruncatedSeries x = cd.var(0), y = cd.var(1), z = cd.var(2);

  TruncatedSeries a01 = x * spow(y, 3) + spow(x, 3) * y + spow(z, 4).scaled(cd.inv_2eps());
  CHECK(cd.alpha(0, 1).equals(a01));
  CHECK(cd.alpha(1, 0).equals(cd.alpha(0, 1)));

  TruncatedSeries b0 = x * y + (z * z).scaled(cd.inv_4eps());
  CHECK(cd.beta(0).equals(b0));

  auto sup = cd.alpha(0, 1).support();
  REQUIRE(sup.size() == 3);  // (1,3,0), (3,1,0), (0,0,4)
}

TEST_CASE("generator degree guard") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 10);
  CHECK_NOTHROW(cd.alpha(0, 1));                       // degree 4
  CHECK_THROWS_AS(cd.alpha(1, 2), DegreeBoundError);   // degree 12
  CHECK_THROWS_AS(cd.beta(2), DegreeBoundError);       // degree 18
}

TEST_CASE("constant contraction matrices") {
  WittRing r(3, 2, 2);
  CrystalData cd(r, 6);
  WittScalar one = WittScalar::from_int(r, 1);
  WittScalar L = WittScalar::lambda(r);

  SeriesMat d01 = cd.d_matrix(0, 1);
  auto cc = [&](const SeriesMat& m, uint32_t i, uint32_t j) {
    auto c = m.at(i, j).coeff(Expo{0, 0, 0});
    return c ? *c : WittScalar(r, 0, 0);
  };
  CHECK(cc(d01, 0, 0) == -one);           // (-1)^(0+1)
  CHECK(cc(d01, 0, 1) == -cd.inv_lambda());
  CHECK(cc(d01, 1, 0) == -L);             // (-1)^1 L
  CHECK(cc(d01, 1, 1) == -one);

  // j + k even kills the product, odd contracts to -2 x the outer matrix
  SeriesMat z = cd.d_matrix(0, 1) * cd.d_matrix(1, 2);
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 2; ++j) CHECK(z.at(i, j).is_zero());
  SeriesMat t = cd.d_matrix(0, 1) * cd.d_matrix(0, 3);
  CHECK(t.equals(cd.d_matrix(0, 3).scaled(WittScalar::from_int(r, -2))));

  for (uint32_t i = 0; i <= 5; ++i)
    for (uint32_t j = 0; j <= 5; ++j) {
      SeriesMat d = cd.d_matrix(i, j);
      TruncatedSeries det = d.at(0, 0) * d.at(1, 1) - d.at(0, 1) * d.at(1, 0);
      CHECK(det.is_zero());
    }
}

TEST_CASE("contraction of the half-row and half-column blocks") {
  WittRing r(3, 2, 2);
  CrystalData cd(r, 19);
  for (uint32_t i = 0; i <= 2; ++i)
    for (uint32_t j = 0; j <= 2; ++j) {
      if (i == j) continue;  // the alpha factor is defined for distinct twists
      SeriesMat prod = cd.c_block(i) * cd.b_block(j);
      SeriesMat want = cd.d_matrix(i, j);
      TruncatedSeries a = cd.alpha(i, j);
      for (uint32_t u = 0; u < 2; ++u)
        for (uint32_t v = 0; v < 2; ++v) want.at(u, v) = want.at(u, v) * a;
      CHECK(prod.equals(want));
    }
}

TEST_CASE("frobenius matrix entries") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 8);
  SeriesMat F = cd.frob_matrix();
  TruncatedSeries x = cd.var(0), y = cd.var(1), z = cd.var(2);

  // third row: (L y, -y, 0, 0, 0)
  CHECK(F.at(2, 0).equals(y.scaled(WittScalar::lambda(r))));
  CHECK(F.at(2, 1).equals(-y));
  CHECK(F.at(2, 2).is_zero());
  CHECK(F.at(2, 3).is_zero());
  CHECK(F.at(2, 4).is_zero());

  // top-left entry: (x y + z^2/4eps) / 2p
  TruncatedSeries want =
      (x * y + (z * z).scaled(cd.inv_4eps())).scaled(cd.half()).p_shift_down(1);
  CHECK(F.at(0, 0).equals(want));
  CHECK(F.at(0, 0).pdenom() == 1);

  // every entry vanishes at the origin
  for (uint32_t i = 0; i < 5; ++i)
    for (uint32_t j = 0; j < 5; ++j) {
      auto c = F.at(i, j).coeff(Expo{0, 0, 0});
      CHECK((!c || c->is_zero()));
    }
}

TEST_CASE("expanded product stabilises at the automatic depth") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 10);
  uint32_t d = cd.auto_depth();
  SeriesMat a = cd.f_infty();
  CHECK(a.equals(cd.f_infty(d)));
  CHECK(a.equals(cd.f_infty(d + 1)));  // deeper factors sit above the degree bound
}

TEST_CASE("expanded product is unipotent at the origin") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 10);
  SeriesMat f = cd.f_infty();
  SeriesMat id = SeriesMat::identity(r, 10, 5);
  for (uint32_t i = 0; i < 5; ++i)
    for (uint32_t j = 0; j < 5; ++j) {
      TruncatedSeries d = f.at(i, j) - id.at(i, j);
      auto c = d.coeff(Expo{0, 0, 0});
      CHECK((!c || c->is_zero()));
    }
}

TEST_CASE("shallow product already shows the linear term") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 5);
  SeriesMat f = cd.f_infty(2);
  auto c = f.at(2, 0).coeff(Expo{0, 1, 0});
  REQUIRE(c.has_value());
  CHECK(*c == WittScalar::lambda(r));
  // nothing below degree 1 in that entry
  CHECK(!f.at(2, 0).coeff(Expo{0, 0, 0}).has_value());
}

TEST_CASE("five-variable form evaluation") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 6);
  auto q = cd.q_prime_upper();
  long long p = 3, e = 2;
  CHECK(q[0][0] == -p * e);
  CHECK(q[1][1] == p);
  CHECK(q[2][3] == 1);
  CHECK(q[4][4] == e);
  CHECK(q[3][3] == 0);
  CHECK(q[2][2] == 0);

  // the eps entries of the form are the multiplicative lift, so the
  // independent route is integer arithmetic mod p^n with that lift
  uint64_t M = r.modulus();
  uint64_t eh = cd.eps_hat().a() % M;
  std::mt19937_64 rng(61);
  for (int t = 0; t < 100; ++t) {
    SpecialEndo w;
    for (int j = 0; j < 5; ++j) w.coord[j] = rng() % M;
    auto sq = [&](uint64_t v) { return v * v % M; };
    uint64_t acc = (M - 3 * eh % M * sq(w.coord[0]) % M) % M;
    acc = (acc + 3 * sq(w.coord[1])) % M;
    acc = (acc + w.coord[2] * w.coord[3]) % M;
    acc = (acc + eh * sq(w.coord[4])) % M;
    CHECK(cd.q_prime_eval(w) == WittScalar(r, acc, 0));
  }
}

TEST_CASE("digit table splits coordinates into multiplicative layers") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 6);
  std::mt19937_64 rng(67);
  for (int t = 0; t < 50; ++t) {
    SpecialEndo w;
    for (int j = 0; j < 5; ++j) w.coord[j] = rng() % r.modulus();
    auto dig = cd.digit_table(w);
    REQUIRE(dig.size() == r.n());
    for (int j = 0; j < 5; ++j) {
      uint64_t acc = 0, pk = 1;
      for (size_t k = 0; k < dig.size(); ++k) {
        uint64_t d = dig[k][j];
        if (d) CHECK(r.pow(d, 3) == d);
        acc = r.add(acc, r.mul(d, pk));
        pk = r.mul(pk, 3);
      }
      CHECK(acc == w.coord[j]);
    }
  }
}

TEST_CASE("integral second-basis matrix") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 8);
  SeriesMat fv = cd.frob_v_matrix();
  for (uint32_t i = 0; i < 5; ++i)
    for (uint32_t j = 0; j < 5; ++j) CHECK(fv.at(i, j).pdenom() == 0);
  // first column carries the cone germ with a minus sign
  CHECK(fv.at(0, 0).equals(-cd.beta(0)));
}

TEST_CASE("period matrix is unipotent") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 8);
  SeriesMat u = cd.u_matrix();
  WittScalar one = WittScalar::from_int(r, 1);
  for (uint32_t i = 0; i < 5; ++i) {
    auto c = u.at(i, i).coeff(Expo{0, 0, 0});
    REQUIRE(c.has_value());
    CHECK(*c == one);
  }
  CHECK(u.at(0, 2).equals(-cd.beta(0)));
  CHECK(u.at(1, 0).is_zero());
}
