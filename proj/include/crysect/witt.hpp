#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace crysect {

struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coefficient ring for the whole artifact: (Z/p^N)[lambda], lambda^2 = eps_hat,
// where eps_hat is the multiplicative (Teichmuller) lift of a fixed quadratic
// nonresidue eps mod p.  Residues mod p^N are held as uint64; p^N must fit in
// 62 bits.  sigma is the semilinear involution fixing the Z/p^N part and
// negating lambda.
class WittRing {
public:
  WittRing(uint32_t p, uint32_t n, uint32_t eps);

  static uint32_t auto_eps(uint32_t p);  // least quadratic nonresidue

  uint64_t p() const { return p_; }
  uint32_t n() const { return n_; }
  uint64_t eps() const { return eps_; }
  uint64_t modulus() const { return pn_; }
  uint64_t eps_lift() const { return eps_lift_; }

  uint64_t add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;
    return s >= pn_ ? s - pn_ : s;
  }
  uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + pn_ - b; }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : pn_ - a; }
  uint64_t mul(uint64_t a, uint64_t b) const {
    return (uint64_t)((unsigned __int128)a * b % pn_);
  }
  uint64_t pow(uint64_t a, uint64_t e) const;
  uint64_t inv(uint64_t a) const;          // Hensel lift of the mod-p inverse
  uint64_t teich(uint64_t r) const;        // Teichmuller lift of r mod p
  uint32_t val(uint64_t a) const;          // p-valuation, n() when a == 0

  // Base-p digits of a canonical representative, little-endian, length n().
  std::vector<uint32_t> base_digits(uint64_t a) const;
  uint64_t from_base_digits(const std::vector<uint32_t>& d) const;

private:
  uint64_t p_, pn_, eps_, eps_lift_;
  uint32_t n_;
};

// Element a + b*lambda of the ring above.  Immutable value type; the ring
// object must outlive every scalar built from it.
class WittScalar {
public:
  WittScalar(const WittRing& r, uint64_t a, uint64_t b) : r_(&r), a_(a), b_(b) {}
  static WittScalar from_int(const WittRing& r, long long v);
  static WittScalar lambda(const WittRing& r) { return WittScalar(r, 0, 1); }

  const WittRing& ring() const { return *r_; }
  uint64_t a() const { return a_; }
  uint64_t b() const { return b_; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_unit() const { return a_ % r_->p() != 0 || b_ % r_->p() != 0; }

  WittScalar operator+(const WittScalar& o) const;
  WittScalar operator-(const WittScalar& o) const;
  WittScalar operator-() const;
  WittScalar operator*(const WittScalar& o) const;
  bool operator==(const WittScalar& o) const { return a_ == o.a_ && b_ == o.b_; }

  WittScalar frobenius() const { return WittScalar(*r_, a_, r_->neg(b_)); }
  WittScalar inverse() const;              // requires is_unit()
  WittScalar pow(uint64_t e) const;

  // min of the coordinate valuations; n() means "divisible by p^N as stored".
  uint32_t p_valuation() const;
  // Exact division by p.  Throws if either coordinate is not divisible; the
  // caller is responsible for effective-precision bookkeeping.
  WittScalar divexact_p() const;
  WittScalar mul_p_pow(uint32_t k) const;
  // Reduce coordinates mod p^k (k <= N).
  WittScalar truncate(uint32_t k) const;

  std::string str() const;

private:
  const WittRing* r_;
  uint64_t a_, b_;
};

// Multiplicative lift of an arbitrary residue-field element (fixed point of
// x -> x^(p^2)); requires a unit or zero.
WittScalar teichmuller(const WittScalar& s);

// Teichmuller digit expansion v = sum digits[k] * p^k of a plain residue,
// each digit the multiplicative lift of an element of F_p (held mod p^N).
std::vector<uint64_t> teichmuller_digits(const WittRing& r, uint64_t v);

}  // namespace crysect
