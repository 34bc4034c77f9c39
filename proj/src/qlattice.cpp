#include "crysect/qlattice.hpp"

#include "crysect/kernels.hpp"
#include "crysect/witt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace crysect {

QuadLattice::QuadLattice(uint32_t r) : rank(r) {
  if (r == 0 || r > 8) throw ConfigError("lattice rank out of range");
  upper.assign(r, std::vector<long long>(r, 0));
}

long long QuadLattice::eval(const std::vector<long long>& v) const {
  long long q = 0;
  for (uint32_t i = 0; i < rank; ++i)
    for (uint32_t j = i; j < rank; ++j) q += upper[i][j] * v[i] * v[j];
  return q;
}

std::vector<std::vector<long long>> QuadLattice::gram_doubled() const {
  std::vector<std::vector<long long>> g(rank, std::vector<long long>(rank, 0));
  for (uint32_t i = 0; i < rank; ++i) {
    g[i][i] = 2 * upper[i][i];
    for (uint32_t j = i + 1; j < rank; ++j) g[i][j] = g[j][i] = upper[i][j];
  }
  return g;
}

static __int128 bareiss_det(std::vector<std::vector<__int128>> a) {
  size_t n = a.size();
  __int128 sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

__int128 QuadLattice::det_doubled() const {
  auto g = gram_doubled();
  std::vector<std::vector<__int128>> a(rank, std::vector<__int128>(rank));
  for (uint32_t i = 0; i < rank; ++i)
    for (uint32_t j = 0; j < rank; ++j) a[i][j] = g[i][j];
  return bareiss_det(a);
}

bool QuadLattice::positive_definite() const {
  auto g = gram_doubled();
  for (uint32_t k = 1; k <= rank; ++k) {
    std::vector<std::vector<__int128>> a(k, std::vector<__int128>(k));
    for (uint32_t i = 0; i < k; ++i)
      for (uint32_t j = 0; j < k; ++j) a[i][j] = g[i][j];
    if (bareiss_det(std::move(a)) <= 0) return false;
  }
  return true;
}

std::string QuadLattice::key() const {
  std::ostringstream os;
  os << "r" << rank;
  for (uint32_t i = 0; i < rank; ++i)
    for (uint32_t j = i; j < rank; ++j) os << "," << upper[i][j];
  return os.str();
}

QuadLattice ambient_lattice() {
  QuadLattice L(5);
  L.upper[0][0] = 1;
  L.upper[1][2] = 1;
  L.upper[3][4] = -1;
  return L;
}

QuadLattice q_prime_lattice(uint64_t p, uint64_t eps) {
  QuadLattice L(5);
  L.upper[0][0] = -(long long)(p * eps);
  L.upper[1][1] = (long long)p;
  L.upper[2][3] = 1;
  L.upper[4][4] = (long long)eps;
  return L;
}

static bool is_square_mod(uint64_t x, uint64_t p) {
  x %= p;
  for (uint64_t t = 0; t < p; ++t)
    if (t * t % p == x) return true;
  return false;
}

QuadLattice toy_lattice(uint64_t p, uint64_t eps) {
  uint64_t k = 1;
  while (true) {
    long long disc = 1 - 4 * (long long)k;
    uint64_t dm = (uint64_t)((disc % (long long)p + (long long)p) % (long long)p);
    if (dm != 0 && is_square_mod(dm, p)) break;
    ++k;
  }
  QuadLattice L(5);
  L.upper[0][0] = (long long)(p * eps);
  L.upper[1][1] = (long long)p;
  L.upper[2][2] = 1;
  L.upper[2][3] = 1;
  L.upper[3][3] = (long long)k;
  L.upper[4][4] = (long long)eps;
  return L;
}

std::vector<uint64_t> representation_histogram(const QuadLattice& L, uint64_t mmax) {
  if (!L.positive_definite())
    throw std::domain_error("representation counting requires a positive definite form");
  uint32_t r = L.rank;
  auto g = L.gram_doubled();
  // LDL^T completion: Q(v) = sum_i A[i] (v_i + sum_{j>i} mu[i][j] v_j)^2.
  std::vector<double> A(r);
  std::vector<std::vector<double>> mu(r, std::vector<double>(r, 0.0));
  for (uint32_t i = 0; i < r; ++i) {
    double d = g[i][i] / 2.0;
    for (uint32_t k = 0; k < i; ++k) d -= A[k] * mu[k][i] * mu[k][i];
    A[i] = d;
    for (uint32_t j = i + 1; j < r; ++j) {
      double s = g[i][j] / 2.0;
      for (uint32_t k = 0; k < i; ++k) s -= A[k] * mu[k][i] * mu[k][j];
      mu[i][j] = s / A[i];
    }
  }
  std::vector<uint64_t> hist(mmax + 1, 0);
  std::vector<long long> v(r, 0);
  double slack = 0.5 + 1e-9 * (double)mmax;
  // Depth-first from the last coordinate; float bounds prune, the exact
  // integer value decides.
  auto descend = [&](auto&& self, uint32_t level, double rem) -> void {
    uint32_t i = level - 1;
    double c = 0;
    for (uint32_t j = i + 1; j < r; ++j) c += mu[i][j] * (double)v[j];
    double t = std::sqrt(std::max(rem, 0.0) / A[i]) + 1e-9;
    long long lo = (long long)std::ceil(-c - t);
    long long hi = (long long)std::floor(-c + t);
    for (long long x = lo; x <= hi; ++x) {
      v[i] = x;
      double used = A[i] * (x + c) * (x + c);
      if (i == 0) {
        long long q = L.eval(v);
        if (q >= 0 && (uint64_t)q <= mmax) ++hist[(uint64_t)q];
      } else {
        self(self, i, rem - used);
      }
    }
    v[i] = 0;
  };
  descend(descend, r, (double)mmax + slack);
  return hist;
}

uint64_t count_representations(const QuadLattice& L, uint64_t m) {
  return representation_histogram(L, m)[m];
}

namespace {

uint64_t reduce_mod(long long c, uint64_t M) {
  long long r = c % (long long)M;
  if (r < 0) r += (long long)M;
  return (uint64_t)r;
}

// Connected components of the cross-term graph.
std::vector<std::vector<uint32_t>> orthogonal_blocks(const QuadLattice& L) {
  uint32_t r = L.rank;
  std::vector<uint32_t> comp(r);
  for (uint32_t i = 0; i < r; ++i) comp[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t i = 0; i < r; ++i)
      for (uint32_t j = i + 1; j < r; ++j)
        if (L.upper[i][j] != 0 && comp[i] != comp[j]) {
          uint32_t c = std::min(comp[i], comp[j]);
          comp[i] = comp[j] = c;
          changed = true;
        }
  }
  std::vector<std::vector<uint32_t>> blocks;
  for (uint32_t c = 0; c < r; ++c) {
    std::vector<uint32_t> b;
    for (uint32_t i = 0; i < r; ++i)
      if (comp[i] == c) b.push_back(i);
    if (!b.empty()) blocks.push_back(b);
  }
  return blocks;
}

bool hyperbolic_block(const QuadLattice& L, const std::vector<uint32_t>& b) {
  return b.size() == 2 && L.upper[b[0]][b[0]] == 0 && L.upper[b[1]][b[1]] == 0 &&
         (L.upper[b[0]][b[1]] == 1 || L.upper[b[0]][b[1]] == -1);
}

// #{(x,y) mod l^a : xy = c} depends only on v_l(c): (v+1)(l-1) l^{a-1} for
// c != 0, and a (l-1) l^{a-1} + l^a at c = 0.
void hyperbolic_histogram(uint64_t l, uint32_t a, uint64_t M, std::vector<uint64_t>& hist) {
  hist.assign(M, 0);
  uint64_t base = (l - 1) * (M / l);
  for (uint64_t c = 1; c < M; ++c) {
    uint64_t v = 0, t = c;
    while (t % l == 0) {
      t /= l;
      ++v;
    }
    hist[c] = (v + 1) * base;
  }
  hist[0] = a * base + M;
}

void block_histogram(const QuadLattice& L, const std::vector<uint32_t>& b, uint64_t l, uint32_t a,
                     uint64_t M, std::vector<uint64_t>& hist) {
  if (b.size() == 1) {
    uint64_t q = reduce_mod(L.upper[b[0]][b[0]], M);
    hist.assign(M, 0);
    uint64_t v = 0, dv = q, dd = (2 * q) % M;
    for (uint64_t x = 0; x < M; ++x) {
      ++hist[v];
      v += dv;
      if (v >= M) v -= M;
      dv += dd;
      if (dv >= M) dv -= M;
    }
    return;
  }
  if (hyperbolic_block(L, b)) {
    hyperbolic_histogram(l, a, M, hist);
    return;
  }
  if (b.size() == 2) {
    quadform_hist(reduce_mod(L.upper[b[0]][b[0]], M), reduce_mod(L.upper[b[0]][b[1]], M),
                  reduce_mod(L.upper[b[1]][b[1]], M), M, hist);
    return;
  }
  hist.assign(M, 0);
  size_t k = b.size();
  std::vector<uint64_t> v(k, 0);
  while (true) {
    unsigned __int128 q = 0;
    for (size_t i = 0; i < k; ++i)
      for (size_t j = i; j < k; ++j)
        q += (unsigned __int128)reduce_mod(L.upper[b[i]][b[j]], M) * v[i] % M * v[j];
    ++hist[(uint64_t)(q % M)];
    size_t i = 0;
    while (i < k && ++v[i] == M) v[i++] = 0;
    if (i == k) break;
  }
}

std::map<std::string, std::vector<uint64_t>>& residue_cache() {
  static std::map<std::string, std::vector<uint64_t>> cache;
  return cache;
}

}  // namespace

void clear_residue_cache() { residue_cache().clear(); }

const std::vector<uint64_t>& residue_histogram(const QuadLattice& L, uint64_t l, uint32_t a) {
  if (l < 2 || a == 0) throw ConfigError("residue histogram needs l >= 2, a >= 1");
  std::string ck = L.key() + "|" + std::to_string(l) + "|" + std::to_string(a);
  auto& cache = residue_cache();
  auto it = cache.find(ck);
  if (it != cache.end()) return it->second;

  double Md = std::pow((double)l, (double)a);
  if (Md > (double)(1u << 26))
    throw PrecisionExhausted("local density: modulus l^a exceeds the histogram budget");
  uint64_t M = 1;
  for (uint32_t i = 0; i < a; ++i) M *= l;

  auto blocks = orthogonal_blocks(L);
  for (auto& b : blocks) {
    double cost = hyperbolic_block(L, b) ? (double)M : std::pow((double)M, (double)b.size());
    if (cost > 2e8)
      throw PrecisionExhausted("local density: block enumeration exceeds the 2e8 point budget");
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& x, const auto& y) { return x.size() > y.size(); });

  std::vector<uint64_t> acc, tmp, out;
  block_histogram(L, blocks[0], l, a, M, acc);
  for (size_t i = 1; i < blocks.size(); ++i) {
    block_histogram(L, blocks[i], l, a, M, tmp);
    cyclic_convolve(acc, tmp, out);
    acc.swap(out);
  }
  return cache.emplace(std::move(ck), std::move(acc)).first->second;
}

Rat local_density_limit(const QuadLattice& L, uint64_t l, uint64_t m, uint32_t a) {
  const auto& hist = residue_histogram(L, l, a);
  uint64_t M = hist.size();
  __int128 den = 1;
  for (uint32_t i = 0; i < a * (L.rank - 1); ++i) den *= (__int128)l;
  return Rat((__int128)hist[m % M], den);
}

static uint32_t valuation(uint64_t v, uint64_t l) {
  uint32_t k = 0;
  while (v != 0 && v % l == 0) {
    v /= l;
    ++k;
  }
  return k;
}

Rat local_density_stabilized(const QuadLattice& L, uint64_t l, uint64_t m) {
  __int128 dd = L.det_doubled();
  if (dd == 0) throw ConfigError("degenerate form has no stabilized density");
  uint64_t dabs = (uint64_t)(dd < 0 ? -dd : dd);
  uint32_t a = std::max<uint32_t>(1, valuation(m, l) + valuation(dabs, l) + 1);
  Rat prev = local_density_limit(L, l, m, a);
  for (uint32_t step = 0; step < 40; ++step) {
    Rat cur = local_density_limit(L, l, m, a + 1);
    if (cur == prev) return cur;
    prev = cur;
    ++a;
  }
  throw PrecisionExhausted("local density failed to stabilize within the level budget");
}

Rat local_density_hanke(const QuadLattice& L, uint64_t p, uint64_t m) {
  if (p < 2 || m % p == 0) throw std::domain_error("level-1 density needs gcd(p, m) = 1");
  const auto& hist = residue_histogram(L, p, 1);
  __int128 den = 1;
  for (uint32_t i = 0; i + 1 < L.rank; ++i) den *= (__int128)p;
  return Rat((__int128)hist[m % p], den);
}

int kronecker(long long a, long long n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  int v = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++v;
  }
  if (v) {
    long long am = ((a % 8) + 8) % 8;
    if ((am & 1) == 0) return 0;
    if ((v & 1) && (am == 3 || am == 5)) result = -result;
  }
  a = ((a % n) + n) % n;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      long long nm = n % 8;
      if (nm == 3 || nm == 5) result = -result;
    }
    std::swap(a, n);
    if ((a % 4) == 3 && (n % 4) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

double dirichlet_L2(long long D, double tol) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  long long dm = ((D % 4) + 4) % 4;
  if (dm != 0 && dm != 1) throw std::invalid_argument("character discriminant must be 0,1 mod 4");
  static std::map<std::pair<long long, double>, double> cache;
  auto it = cache.find({D, tol});
  if (it != cache.end()) return it->second;
  uint64_t period = (uint64_t)(D < 0 ? -D : D);
  if (period == 0) period = 1;
  std::vector<int8_t> chi(period);
  for (uint64_t i = 0; i < period; ++i) chi[i] = (int8_t)kronecker(D, (long long)i);
  uint64_t N = (uint64_t)std::ceil(1.0 / tol) + 16;
  double s = 0;
  for (uint64_t n = 1; n <= N; ++n) {
    int c = chi[n % period];
    if (c) s += (double)c / ((double)n * (double)n);
  }
  cache[{D, tol}] = s;
  return s;
}

namespace {

struct Factorization {
  std::vector<std::pair<uint64_t, uint32_t>> pk;
};

Factorization factorize(uint64_t n) {
  Factorization f;
  for (uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      uint32_t e = 0;
      while (n % q == 0) {
        n /= q;
        ++e;
      }
      f.pk.push_back({q, e});
    }
  if (n > 1) f.pk.push_back({n, 1});
  return f;
}

Rat sigma_minus3(uint64_t g) {
  Rat s(0);
  for (uint64_t e = 1; e <= g; ++e)
    if (g % e == 0) s = s + Rat(1, (__int128)e * e * e);
  return s;
}

}  // namespace

double eisenstein_coeff(const QuadLattice& L, uint64_t m, double tol) {
  if (m == 0) throw std::domain_error("coefficient index must be positive");
  __int128 dd = L.det_doubled();
  uint64_t det = (uint64_t)(dd < 0 ? -dd : dd);
  if (det == 0) throw ConfigError("degenerate form");

  auto fm = factorize(m);
  uint64_t f = 1;
  for (auto [q, e] : fm.pk) {
    if ((2 * det) % q == 0) continue;
    for (uint32_t i = 0; i < e / 2; ++i) f *= q;
  }
  uint64_t m0 = m / (f * f);
  long long D = -2 * (long long)m0 * (long long)det;

  Rat dsum(0);
  auto ff = factorize(f);
  uint32_t nf = (uint32_t)ff.pk.size();
  for (uint32_t mask = 0; mask < (1u << nf); ++mask) {  // squarefree d | f
    uint64_t d = 1;
    int mob = 1;
    for (uint32_t i = 0; i < nf; ++i)
      if (mask & (1u << i)) {
        d *= ff.pk[i].first;
        mob = -mob;
      }
    int chid = kronecker(D, (long long)d);
    if (chid == 0) continue;
    dsum = dsum + Rat(mob * chid, (__int128)d * d) * sigma_minus3(f / d);
  }

  Rat dens(1);
  for (auto [l, e] : factorize(2 * det).pk) {
    (void)e;
    __int128 l4 = (__int128)l * l * l * l;
    dens = dens * local_density_stabilized(L, l, m) / Rat(l4 - 1, l4);
  }

  double L2 = dirichlet_L2(D, tol);
  double pi = 3.14159265358979323846;
  double zeta4 = pi * pi * pi * pi / 90.0;
  double pref = -16.0 * std::sqrt(2.0) * pi * pi * std::pow((double)m, 1.5) * L2 /
                (2.0 * std::sqrt((double)det) * zeta4);
  return pref * dsum.to_double() * dens.to_double();
}

double eisenstein_ratio(const QuadLattice& Lppp, uint64_t p, uint64_t m) {
  Rat delta = (m % p == 0) ? local_density_stabilized(Lppp, p, m) : local_density_hanke(Lppp, p, m);
  int leg = kronecker((long long)m, (long long)p);
  __int128 dd = Lppp.det_doubled();
  uint64_t dabs = (uint64_t)(dd < 0 ? -dd : dd);
  uint32_t vp = valuation(dabs, p);
  double sq = std::pow((double)p, vp / 2.0);
  double p2 = (double)p * (double)p;
  double num = delta.to_double() * (1.0 - (double)leg / p2);
  return num / (sq * (1.0 - 1.0 / (p2 * p2)));
}

}  // namespace crysect
