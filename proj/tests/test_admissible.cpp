#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crysect/admissible.hpp"

#include <algorithm>
#include <random>

using namespace crysect;

namespace {

IndexSystem mk(std::optional<uint32_t> lead, std::vector<uint32_t> I, std::vector<uint32_t> J,
               std::optional<uint32_t> trail = std::nullopt) {
  IndexSystem s;
  s.lead = lead;
  s.I = std::move(I);
  s.J = std::move(J);
  s.trail = trail;
  return s;
}

bool contains(const std::vector<IndexSystem>& v, const IndexSystem& s) {
  return std::any_of(v.begin(), v.end(), [&](const IndexSystem& t) {
    return t.lead == s.lead && t.I == s.I && t.J == s.J && t.trail == s.trail;
  });
}

}  // namespace

TEST_CASE("validity of the worked seven-factor system") {
  IndexSystem good = mk(1, {2, 3, 5, 7, 8, 9}, {4, 10, 13}, 16);
  CHECK(is_admissible(good));
  CHECK(good.length() == 7);
  CHECK(good.min_index() == 1);
  CHECK(good.max_index() == 16);

  IndexSystem bad = mk(1, {2, 3, 5, 6, 8, 9}, {4, 10, 13});
  CHECK(!is_admissible(bad));

  IndexSystem empty;
  CHECK(is_admissible(empty));
  CHECK(empty.length() == 0);
}

TEST_CASE("attached degree of a system") {
  IndexSystem s = mk(std::nullopt, {0, 1}, {});
  CHECK(s.min_degree(3) == 4);  // p^0 + p^1
  IndexSystem t = mk(std::nullopt, {}, {0});
  CHECK(t.min_degree(3) == 2);  // 2 p^0
  IndexSystem u = mk(std::nullopt, {}, {1});
  CHECK(u.min_degree(3) == 6);
  IndexSystem w = mk(0, {}, {0}, 1);
  CHECK(w.min_degree(3) == 6);  // 1 + 2 + 3
}

TEST_CASE("enumeration at length one respects degree and parity filters") {
  auto even = enumerate_systems(1, Star::Even, SystemKind::IJ, 3, 8);
  CHECK(even.size() == 2);
  CHECK(contains(even, mk(std::nullopt, {0, 1}, {})));
  CHECK(contains(even, mk(std::nullopt, {}, {0})));

  auto odd = enumerate_systems(1, Star::Odd, SystemKind::IJ, 3, 8);
  CHECK(odd.size() == 1);
  CHECK(contains(odd, mk(std::nullopt, {}, {1})));

  auto all = enumerate_systems(1, Star::Void, SystemKind::IJ, 3, 8);
  CHECK(all.size() == even.size() + odd.size());

  auto none = enumerate_systems(0, Star::Void, SystemKind::IJ, 3, 8);
  REQUIRE(none.size() == 1);
  CHECK(none[0].core_empty());
  CHECK(!none[0].lead);
  CHECK(!none[0].trail);
}

TEST_CASE("every enumerated system is admissible and within degree") {
  for (auto kind : {SystemKind::IJ, SystemKind::LeadIJ, SystemKind::IJTrail,
                    SystemKind::LeadIJTrail}) {
    for (uint32_t len = 1; len <= 4; ++len) {
      for (const auto& s : enumerate_systems(len, Star::Void, kind, 3, 30)) {
        CHECK(is_admissible(s));
        CHECK(s.length() == len);
        CHECK(s.kind() == kind);
        CHECK(s.min_degree(3) < 30);
      }
    }
  }
}

TEST_CASE("factor product at the smallest systems") {
  WittRing r(3, 2, 2);
  CrystalData cd(r, 8);

  IndexSystem s01 = mk(std::nullopt, {0, 1}, {});
  SeriesMat direct = cd.c_block(0) * cd.b_block(1);
  CHECK(a_product(s01, cd).equals(direct));
  CHECK(a_product(s01, cd).equals(closed_form_a({0, 1}, {}, cd)));

  IndexSystem e0 = mk(std::nullopt, {}, {0});
  SeriesMat be = cd.d_matrix(0, 0);
  TruncatedSeries b0 = cd.beta(0);
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 2; ++j) be.at(i, j) = be.at(i, j) * b0;
  CHECK(a_product(e0, cd).equals(be));

  IndexSystem empty;
  CHECK(a_product(empty, cd).equals(SeriesMat::identity(r, 8, 2)));
}

TEST_CASE("collapsed product formula at length two") {
  WittRing r(3, 2, 2);
  CrystalData cd(r, 10);
  // two single-index factors contract with one extra -2
  SeriesMat want = cd.d_matrix(0, 1);
  TruncatedSeries bb = cd.beta(0) * cd.beta(1);
  WittScalar m2 = WittScalar::from_int(r, -2);
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 2; ++j) want.at(i, j) = (want.at(i, j) * bb).scaled(m2);
  CHECK(closed_form_a({}, {0, 1}, cd).equals(want));
  CHECK(a_product(mk(std::nullopt, {}, {0, 1}), cd).equals(want));
}

TEST_CASE("collapsed product equals the factor product everywhere below the bound") {
  WittRing r(3, 2, 2);
  CrystalData cd(r, 27);
  for (uint32_t len = 1;; ++len) {
    auto systems = enumerate_systems(len, Star::Void, SystemKind::IJ, 3, 27);
    if (systems.empty()) break;
    for (const auto& s : systems)
      CHECK(a_product(s, cd).equals(closed_form_a(s.I, s.J, cd)));
  }
}

TEST_CASE("graded block partitions by parity and repeats the column pattern") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 14);
  for (uint32_t n = 1; n <= 2; ++n) {
    SeriesMat sum = f_block(n, Star::Even, cd) + f_block(n, Star::Odd, cd);
    CHECK(sum.equals(f_block(n, Star::Void, cd)));
  }

  SeriesMat f1 = f_block(1, Star::Even, cd);
  WittScalar L = WittScalar::lambda(r);
  for (uint32_t c = 0; c < 2; ++c) CHECK(f1.at(1, c).equals(f1.at(0, c).scaled(L)));
}

TEST_CASE("digit-weighted image: basics") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 8);

  SpecialEndo zero;
  auto g0 = g_series(1, Star::Void, zero, cd);
  for (const auto& s : g0) CHECK(s.is_zero());

  // unit coordinate vectors reproduce the block columns
  SeriesMat f1 = f_block(1, Star::Void, cd);
  for (int j = 0; j < 5; ++j) {
    SpecialEndo w;
    w.coord[j] = 1;
    auto g = g_series(1, Star::Void, w, cd);
    for (uint32_t i = 0; i < 5; ++i) CHECK(g[i].equals(f1.at(i, j)));
  }
}

TEST_CASE("digit-weighted image: leading monomial of the third column") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 4);
  SpecialEndo w3;
  w3.coord[2] = 1;
  auto g = g_series(1, Star::Even, w3, cd);
  WittScalar inv2L =
      (WittScalar::from_int(r, 2) * WittScalar::lambda(r)).inverse();
  TruncatedSeries want = cd.var(0).scaled(inv2L);
  CHECK(g[0].equals(want));
}

TEST_CASE("level reduction agrees with direct summation") {
  WittRing r(3, 3, 2);
  CrystalData cd(r, 14);
  std::mt19937_64 rng(71);
  for (int t = 0; t < 5; ++t) {
    SpecialEndo w;
    for (int j = 0; j < 5; ++j) w.coord[j] = rng() % r.modulus();
    for (uint32_t n = 1; n <= 2; ++n)
      for (uint32_t m = 1; m <= n; ++m)
        for (Star st : {Star::Even, Star::Odd, Star::Void}) {
          auto direct = g_series(n, st, w, cd);
          auto red = g_series_recursive(n, st, w, m, cd);
          for (int i = 0; i < 5; ++i) CHECK(direct[i].equals(red[i]));
        }
  }
}

// Base-p digit sums of any supported monomial identify the generating
// system: an index appearing in the pair-set leaves one digit, an index in
// the single-set leaves two, a trailing coordinate factor leaves one more at
// the top.  The parity of the z-digit sum flags a z-trail, and the x-vs-y
// digit comparison separates the two other trails.
TEST_CASE("monomial digits reconstruct the generating system") {
  WittRing r(3, 2, 2);
  uint32_t D = 14;
  CrystalData cd(r, D);
  uint64_t p = 3;

  auto digit_sum = [&](uint32_t v) {
    uint32_t s = 0;
    while (v) {
      s += v % p;
      v /= p;
    }
    return s;
  };
  auto occurrences = [&](uint32_t v, std::vector<uint32_t>& occ) {
    for (uint32_t k = 0; v; ++k, v /= p) {
      if (occ.size() <= k) occ.resize(k + 1);
      occ[k] += v % p;
    }
  };

  int families = 0, monomials = 0;
  for (auto kind : {SystemKind::IJ, SystemKind::IJTrail}) {
    for (uint32_t len = 1;; ++len) {
      auto systems = enumerate_systems(len, Star::Void, kind, p, D);
      if (systems.empty()) break;
      for (const auto& sys : systems) {
        TruncatedSeries core = alpha_prod(sys.I, cd) * beta_prod(sys.J, cd);
        int nvars = sys.trail ? 3 : 1;
        for (int which = 0; which < nvars; ++which) {
          TruncatedSeries fam =
              sys.trail ? core * cd.var_twist(which, *sys.trail) : core;
          if (fam.is_zero()) continue;
          ++families;
          for (const Expo& e : fam.support()) {
            ++monomials;
            // trail coordinate from parity and digit comparison
            bool z_trail = digit_sum(e.z) % 2 == 1;
            int dx = (int)digit_sum(e.x) - (int)digit_sum(e.y);
            if (sys.trail) {
              if (which == 2) {
                CHECK(z_trail);
                CHECK(dx == 0);
              } else if (which == 0) {
                CHECK(!z_trail);
                CHECK(dx == 1);
              } else {
                CHECK(!z_trail);
                CHECK(dx == -1);
              }
            } else {
              CHECK(!z_trail);
              CHECK(dx == 0);
            }

            // occurrence vector across all three exponents
            std::vector<uint32_t> occ;
            occurrences(e.x, occ);
            occurrences(e.y, occ);
            occurrences(e.z, occ);
            std::vector<uint32_t> singles, doubles;
            for (uint32_t k = 0; k < occ.size(); ++k) {
              if (occ[k] == 1) singles.push_back(k);
              if (occ[k] == 2) doubles.push_back(k);
              CHECK(occ[k] <= 2);
            }
            CHECK(doubles == sys.J);
            std::vector<uint32_t> expect_singles = sys.I;
            if (sys.trail) expect_singles.push_back(*sys.trail);
            std::sort(expect_singles.begin(), expect_singles.end());
            CHECK(singles == expect_singles);
          }
        }
      }
    }
  }
  CHECK(families > 10);
  CHECK(monomials > 30);
}

TEST_CASE("image coefficients are zero or units at both small primes") {
  for (uint32_t p : {3u, 5u}) {
    WittRing r(p, 3, 2);
    CrystalData cd(r, p * p + p + 2);
    std::mt19937_64 rng(100 + p);
    for (int t = 0; t < 50; ++t) {
      SpecialEndo w;
      for (int j = 0; j < 5; ++j) w.coord[j] = rng() % r.modulus();
      for (uint32_t n = 1; n <= 3; ++n)
        for (Star st : {Star::Even, Star::Odd, Star::Void}) {
          TruncatedSeries g = g_series(n, st, w, cd)[0];
          CHECK(g.pdenom() == 0);
          for (const auto& [k, c] : g.terms()) CHECK((c.is_zero() || c.is_unit()));
        }
    }
  }
}
