#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crysect/kernels.hpp"

#include <random>

using namespace crysect;

static void hist_bruteforce(uint64_t q11, uint64_t q12, uint64_t q22, uint64_t M,
                            std::vector<uint64_t>& hist) {
  hist.assign(M, 0);
  for (uint64_t x = 0; x < M; ++x)
    for (uint64_t y = 0; y < M; ++y) {
      unsigned __int128 v = (unsigned __int128)q11 * x * x + (unsigned __int128)q12 * x * y +
                            (unsigned __int128)q22 * y * y;
      ++hist[(uint64_t)(v % M)];
    }
}

TEST_CASE("pair histogram on a tiny modulus") {
  std::vector<uint64_t> h;
  quadform_hist(1, 0, 1, 4, h);
  REQUIRE(h.size() == 4);
  CHECK(h[0] == 4);
  CHECK(h[1] == 8);
  CHECK(h[2] == 4);
  CHECK(h[3] == 0);
}

TEST_CASE("pair histogram against brute force") {
  std::mt19937_64 rng(101);
  for (uint64_t M : {3ull, 8ull, 9ull, 16ull, 25ull, 27ull}) {
    for (int t = 0; t < 4; ++t) {
      uint64_t q11 = rng() % M, q12 = rng() % M, q22 = rng() % M;
      std::vector<uint64_t> got, want;
      quadform_hist(q11, q12, q22, M, got);
      hist_bruteforce(q11, q12, q22, M, want);
      CHECK(got == want);
    }
  }
}

TEST_CASE("vector and scalar histogram paths agree") {
  std::mt19937_64 rng(103);
  for (uint64_t M : {2ull, 4ull, 32ull, 128ull, 256ull, 243ull, 125ull}) {
    for (int t = 0; t < 3; ++t) {
      uint64_t q11 = rng() % M, q12 = rng() % M, q22 = rng() % M;
      std::vector<uint64_t> a, b;
      quadform_hist(q11, q12, q22, M, a);
      quadform_hist_scalar(q11, q12, q22, M, b);
      CHECK(a == b);
    }
  }
}

TEST_CASE("cyclic convolution basics") {
  std::vector<uint64_t> a{1, 2, 3}, b{4, 5, 6}, out;
  cyclic_convolve(a, b, out);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == 31);
  CHECK(out[1] == 31);
  CHECK(out[2] == 28);
}

TEST_CASE("vector and scalar convolution paths agree") {
  std::mt19937_64 rng(107);
  for (size_t n : {1, 2, 7, 16, 64, 81, 100}) {
    for (int t = 0; t < 3; ++t) {
      std::vector<uint64_t> a(n), b(n), u, v;
      bool big = t == 2;  // exercise the 64-bit fallback too
      for (size_t i = 0; i < n; ++i) {
        a[i] = big ? rng() : rng() % (1u << 16);
        b[i] = big ? rng() % 4 : rng() % (1u << 16);
      }
      cyclic_convolve(a, b, u);
      cyclic_convolve_scalar(a, b, v);
      CHECK(u == v);
    }
  }
}

TEST_CASE("convolution mass is the product of masses") {
  std::mt19937_64 rng(109);
  std::vector<uint64_t> a(37), b(37), out;
  uint64_t sa = 0, sb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = rng() % 1000;
    b[i] = rng() % 1000;
    sa += a[i];
    sb += b[i];
  }
  cyclic_convolve(a, b, out);
  uint64_t so = 0;
  for (uint64_t v : out) so += v;
  CHECK(so == sa * sb);
}

TEST_CASE("vector path reports its availability") {
  // nothing to assert beyond callability on this host
  (void)simd_active();
}
