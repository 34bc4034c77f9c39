#include "crysect/witt.hpp"

namespace crysect {

static bool is_prime_u32(uint32_t v) {
  if (v < 2) return false;
  for (uint32_t d = 2; (uint64_t)d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

uint32_t WittRing::auto_eps(uint32_t p) {
  // Least nonresidue; exists for odd p, found by direct Euler criterion.
  for (uint32_t e = 2; e < p; ++e) {
    uint64_t acc = 1, base = e, k = (p - 1) / 2;
    while (k) {
      if (k & 1) acc = acc * base % p;
      base = base * base % p;
      k >>= 1;
    }
    if (acc == p - 1) return e;
  }
  throw ConfigError("no quadratic nonresidue found (p must be an odd prime)");
}

WittRing::WittRing(uint32_t p, uint32_t n, uint32_t eps) : p_(p), eps_(eps), n_(n) {
  if (!is_prime_u32(p) || p < 3) throw ConfigError("p must be an odd prime >= 3");
  if (n < 1) throw ConfigError("precision must be >= 1");
  unsigned __int128 m = 1;
  for (uint32_t i = 0; i < n; ++i) {
    m *= p;
    if (m >> 62) throw ConfigError("p^N exceeds 62 bits");
  }
  pn_ = (uint64_t)m;
  if (eps == 0 || eps >= p) throw ConfigError("eps must be a residue in (0, p)");
  // Euler criterion: reject squares so that lambda generates a quadratic ext.
  uint64_t acc = 1, base = eps, k = (p - 1) / 2;
  while (k) {
    if (k & 1) acc = acc * base % p;
    base = base * base % p;
    k >>= 1;
  }
  if (acc != p - 1) throw ConfigError("eps is a square mod p");
  eps_lift_ = teich(eps);
}

uint64_t WittRing::pow(uint64_t a, uint64_t e) const {
  uint64_t acc = 1 % pn_;
  a %= pn_;
  while (e) {
    if (e & 1) acc = mul(acc, a);
    a = mul(a, a);
    e >>= 1;
  }
  return acc;
}

uint64_t WittRing::inv(uint64_t a) const {
  if (a % p_ == 0) throw std::domain_error("inverse of a non-unit");
  // Inverse mod p by Fermat, then Hensel (Newton) doubling to mod p^N.
  uint64_t x = 1, b = a % p_, k = p_ - 2;
  while (k) {
    if (k & 1) x = x * b % p_;
    b = b * b % p_;
    k >>= 1;
  }
  uint64_t prec = p_;
  while (prec < pn_) {
    unsigned __int128 sq = (unsigned __int128)prec * prec;
    prec = sq >= pn_ ? pn_ : (uint64_t)sq;
    // x <- x*(2 - a*x) mod prec
    uint64_t ax = (uint64_t)((unsigned __int128)a * x % prec);
    uint64_t t = ax <= 2 ? 2 - ax : prec - ax + 2;
    t %= prec;
    x = (uint64_t)((unsigned __int128)x * t % prec);
  }
  return x % pn_;
}

uint64_t WittRing::teich(uint64_t r) const {
  r %= p_;
  if (r == 0) return 0;
  // Fixed point of x -> x^p starting from the residue; each step gains a digit.
  uint64_t x = r;
  for (uint32_t i = 0; i < n_; ++i) {
    uint64_t nx = pow(x, p_);
    if (nx == x) break;
    x = nx;
  }
  return x;
}

uint32_t WittRing::val(uint64_t a) const {
  if (a == 0) return n_;
  uint32_t v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

std::vector<uint32_t> WittRing::base_digits(uint64_t a) const {
  std::vector<uint32_t> d(n_);
  for (uint32_t i = 0; i < n_; ++i) {
    d[i] = (uint32_t)(a % p_);
    a /= p_;
  }
  return d;
}

uint64_t WittRing::from_base_digits(const std::vector<uint32_t>& d) const {
  uint64_t a = 0, w = 1;
  for (uint32_t i = 0; i < n_ && i < d.size(); ++i) {
    if (d[i] >= p_) throw ConfigError("digit out of range");
    a = add(a, mul(w, d[i]));
    w = mul(w, p_);
  }
  return a;
}

WittScalar WittScalar::from_int(const WittRing& r, long long v) {
  uint64_t m = r.modulus();
  long long red = v % (long long)m;
  if (red < 0) red += (long long)m;
  return WittScalar(r, (uint64_t)red, 0);
}

WittScalar WittScalar::operator+(const WittScalar& o) const {
  return WittScalar(*r_, r_->add(a_, o.a_), r_->add(b_, o.b_));
}

WittScalar WittScalar::operator-(const WittScalar& o) const {
  return WittScalar(*r_, r_->sub(a_, o.a_), r_->sub(b_, o.b_));
}

WittScalar WittScalar::operator-() const {
  return WittScalar(*r_, r_->neg(a_), r_->neg(b_));
}

WittScalar WittScalar::operator*(const WittScalar& o) const {
  // (a1 + b1 L)(a2 + b2 L) with L^2 = eps_lift
  uint64_t a = r_->add(r_->mul(a_, o.a_), r_->mul(r_->eps_lift(), r_->mul(b_, o.b_)));
  uint64_t b = r_->add(r_->mul(a_, o.b_), r_->mul(b_, o.a_));
  return WittScalar(*r_, a, b);
}

WittScalar WittScalar::inverse() const {
  // (a + bL)^-1 = (a - bL) / (a^2 - eps b^2); the norm is a unit exactly when
  // the element is one, because eps is a nonresidue.
  uint64_t nrm = r_->sub(r_->mul(a_, a_), r_->mul(r_->eps_lift(), r_->mul(b_, b_)));
  uint64_t ni = r_->inv(nrm);
  return WittScalar(*r_, r_->mul(a_, ni), r_->mul(r_->neg(b_), ni));
}

WittScalar WittScalar::pow(uint64_t e) const {
  WittScalar acc = from_int(*r_, 1), base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

uint32_t WittScalar::p_valuation() const {
  uint32_t va = r_->val(a_), vb = r_->val(b_);
  return va < vb ? va : vb;
}

WittScalar WittScalar::divexact_p() const {
  uint64_t p = r_->p();
  if (a_ % p != 0 || b_ % p != 0) throw std::domain_error("inexact division by p");
  return WittScalar(*r_, a_ / p, b_ / p);
}

WittScalar WittScalar::mul_p_pow(uint32_t k) const {
  WittScalar s = *this;
  for (uint32_t i = 0; i < k; ++i)
    s = WittScalar(*r_, r_->mul(s.a_, r_->p()), r_->mul(s.b_, r_->p()));
  return s;
}

WittScalar WittScalar::truncate(uint32_t k) const {
  if (k >= r_->n()) return *this;
  uint64_t m = 1;
  for (uint32_t i = 0; i < k; ++i) m *= r_->p();
  return WittScalar(*r_, a_ % m, b_ % m);
}

std::string WittScalar::str() const {
  return std::to_string(a_) + "+" + std::to_string(b_) + "*L";
}

WittScalar teichmuller(const WittScalar& s) {
  if (s.is_zero()) return s;
  if (!s.is_unit()) throw std::domain_error("teichmuller lift of a non-unit");
  const WittRing& r = s.ring();
  uint64_t q = r.p() * r.p();
  WittScalar x = s;
  for (uint32_t i = 0; i <= r.n(); ++i) {
    WittScalar nx = x.pow(q);
    if (nx == x) break;
    x = nx;
  }
  return x;
}

std::vector<uint64_t> teichmuller_digits(const WittRing& r, uint64_t v) {
  std::vector<uint64_t> out(r.n());
  uint64_t rest = v % r.modulus();
  for (uint32_t k = 0; k < r.n(); ++k) {
    uint64_t t = r.teich(rest % r.p());
    out[k] = t;
    rest = r.sub(rest, t) / r.p();
  }
  return out;
}

}  // namespace crysect
