#include "crysect/kernels.hpp"

#include <stdexcept>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define CRYSECT_X86 1
#endif

namespace crysect {

void quadform_hist_scalar(uint64_t q11, uint64_t q12, uint64_t q22, uint64_t M,
                          std::vector<uint64_t>& hist) {
  if (M == 0) throw std::invalid_argument("modulus must be positive");
  hist.assign(M, 0);
  q11 %= M;
  q12 %= M;
  q22 %= M;
  uint64_t two_q22 = (2 * q22) % M;
  for (uint64_t x = 0; x < M; ++x) {
    uint64_t v = (unsigned __int128)q11 * x % M * x % M;
    uint64_t dv = ((unsigned __int128)q12 * x + q22) % M;
    for (uint64_t y = 0; y < M; ++y) {
      ++hist[v];
      v += dv;
      if (v >= M) v -= M;
      dv += two_q22;
      if (dv >= M) dv -= M;
    }
  }
}

void cyclic_convolve_scalar(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                            std::vector<uint64_t>& out) {
  size_t n = a.size();
  if (n == 0 || b.size() != n) throw std::invalid_argument("length mismatch");
  out.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    uint64_t ai = a[i];
    if (!ai) continue;
    size_t head = n - i;
    for (size_t j = 0; j < head; ++j) out[i + j] += ai * b[j];
    for (size_t j = head; j < n; ++j) out[i + j - n] += ai * b[j];
  }
}

#ifdef CRYSECT_X86

__attribute__((target("avx2"))) static void quadform_hist_avx2(uint64_t q11, uint64_t q12,
                                                               uint64_t q22, uint64_t M,
                                                               std::vector<uint64_t>& hist) {
  // M is a power of two here; reduction is a mask.
  hist.assign(M, 0);
  uint64_t mask = M - 1;
  q11 &= mask;
  q12 &= mask;
  q22 &= mask;
  __m256i vmask = _mm256_set1_epi64x((long long)mask);
  alignas(32) uint64_t buf[4096];
  for (uint64_t x = 0; x < M; ++x) {
    uint64_t c1 = ((unsigned __int128)q12 * x) % M;
    uint64_t base = (unsigned __int128)q11 * x % M * x % M;
    // Lane l starts at y = l; the stride-4 step has a linear difference.
    uint64_t v0[4], d0[4];
    for (uint64_t l = 0; l < 4 && l < M; ++l) {
      v0[l] = (base + c1 * l + (unsigned __int128)q22 * l % M * l) & mask;
      // v(y+4) - v(y) = 4 c1 + q22 (8y + 16)
      d0[l] = (4 * c1 + q22 * ((8 * l + 16) & mask)) & mask;
    }
    if (M < 4) {  // tiny modulus: scalar tail only
      for (uint64_t y = 0; y < M; ++y)
        ++hist[(base + c1 * y + (unsigned __int128)q22 * y % M * y) & mask];
      continue;
    }
    __m256i v = _mm256_loadu_si256((const __m256i*)v0);
    __m256i d = _mm256_loadu_si256((const __m256i*)d0);
    __m256i dd = _mm256_set1_epi64x((long long)((32 * q22) & mask));
    for (uint64_t y = 0; y < M; y += 4096) {
      uint64_t chunk = M - y < 4096 ? M - y : 4096;
      uint64_t quads = chunk / 4;
      for (uint64_t q = 0; q < quads; ++q) {
        _mm256_store_si256((__m256i*)(buf + 4 * q), v);
        v = _mm256_and_si256(_mm256_add_epi64(v, d), vmask);
        d = _mm256_and_si256(_mm256_add_epi64(d, dd), vmask);
      }
      for (uint64_t t = 0; t < quads * 4; ++t) ++hist[buf[t]];
      for (uint64_t t = quads * 4; t < chunk; ++t) {
        uint64_t yy = y + t;
        ++hist[(base + c1 * yy + (unsigned __int128)q22 * yy % M * yy) & mask];
      }
    }
  }
}

__attribute__((target("avx2"))) static void cyclic_convolve_avx2(const std::vector<uint64_t>& a,
                                                                 const std::vector<uint64_t>& b,
                                                                 std::vector<uint64_t>& out) {
  size_t n = a.size();
  out.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    uint64_t ai = a[i];
    if (!ai) continue;
    __m256i vai = _mm256_set1_epi64x((long long)ai);
    size_t head = n - i;
    uint64_t* o1 = out.data() + i;
    const uint64_t* bp = b.data();
    size_t j = 0;
    for (; j + 4 <= head; j += 4) {
      __m256i vb = _mm256_loadu_si256((const __m256i*)(bp + j));
      __m256i prod = _mm256_mul_epu32(vai, vb);
      __m256i cur = _mm256_loadu_si256((const __m256i*)(o1 + j));
      _mm256_storeu_si256((__m256i*)(o1 + j), _mm256_add_epi64(cur, prod));
    }
    for (; j < head; ++j) o1[j] += ai * bp[j];
    uint64_t* o2 = out.data();
    size_t m = n - head;
    size_t k = 0;
    for (; k + 4 <= m; k += 4) {
      __m256i vb = _mm256_loadu_si256((const __m256i*)(bp + head + k));
      __m256i prod = _mm256_mul_epu32(vai, vb);
      __m256i cur = _mm256_loadu_si256((const __m256i*)(o2 + k));
      _mm256_storeu_si256((__m256i*)(o2 + k), _mm256_add_epi64(cur, prod));
    }
    for (; k < m; ++k) o2[k] += ai * b[head + k];
  }
}

static bool have_avx2() {
  static const bool v = __builtin_cpu_supports("avx2");
  return v;
}

#else
static bool have_avx2() { return false; }
#endif

bool simd_active() { return have_avx2(); }

void quadform_hist(uint64_t q11, uint64_t q12, uint64_t q22, uint64_t M,
                   std::vector<uint64_t>& hist) {
#ifdef CRYSECT_X86
  if (have_avx2() && M >= 8 && (M & (M - 1)) == 0) {
    quadform_hist_avx2(q11, q12, q22, M, hist);
    return;
  }
#endif
  quadform_hist_scalar(q11, q12, q22, M, hist);
}

void cyclic_convolve(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                     std::vector<uint64_t>& out) {
  size_t n = a.size();
  if (n == 0 || b.size() != n) throw std::invalid_argument("length mismatch");
#ifdef CRYSECT_X86
  if (have_avx2() && n >= 8) {
    bool fits = true;
    for (size_t i = 0; i < n && fits; ++i) fits = a[i] < (1ull << 32) && b[i] < (1ull << 32);
    if (fits) {
      cyclic_convolve_avx2(a, b, out);
      return;
    }
  }
#endif
  cyclic_convolve_scalar(a, b, out);
}

}  // namespace crysect
