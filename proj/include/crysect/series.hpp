#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "crysect/witt.hpp"

namespace crysect {

struct DegreeBoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponent triple for the three deformation coordinates.  Packed into a u64
// so the coefficient map iterates in a fixed deterministic order.
struct Expo {
  uint32_t x = 0, y = 0, z = 0;
  uint32_t total() const { return x + y + z; }
  uint64_t key() const {
    return ((uint64_t)x << 42) | ((uint64_t)y << 21) | z;
  }
  static Expo from_key(uint64_t k) {
    return Expo{(uint32_t)(k >> 42), (uint32_t)((k >> 21) & 0x1FFFFF), (uint32_t)(k & 0x1FFFFF)};
  }
};

// Valuation of a truncated series: either pinned exactly or only bounded
// below by the truncation level.
struct TVal {
  bool at_least = false;
  long v = 0;
  static TVal exact(long k) { return TVal{false, k}; }
  static TVal lower_bound(long k) { return TVal{true, k}; }
  bool operator==(const TVal& o) const { return at_least == o.at_least && v == o.v; }
  std::string str() const {
    return at_least ? ">=" + std::to_string(v) : std::to_string(v);
  }
};

// Sparse series in three variables over the Witt ring, truncated at total
// degree < deg_bound.  A value may carry a power-of-p denominator (pdenom);
// the stored coefficients are the integral numerator, kept reduced mod
// p^n_eff where n_eff tracks how many p-digits are still trustworthy after
// exact divisions by p.  pdenom is kept minimal: after normalisation either
// some coefficient is a unit or the series is zero.
class TruncatedSeries {
public:
  TruncatedSeries(const WittRing& r, uint32_t deg_bound)
      : r_(&r), deg_(deg_bound), n_eff_(r.n()) {}

  static TruncatedSeries zero(const WittRing& r, uint32_t deg_bound) {
    return TruncatedSeries(r, deg_bound);
  }
  static TruncatedSeries constant(const WittRing& r, uint32_t deg_bound, const WittScalar& c);
  static TruncatedSeries variable(const WittRing& r, uint32_t deg_bound, int which);

  const WittRing& ring() const { return *r_; }
  uint32_t deg_bound() const { return deg_; }
  uint32_t pdenom() const { return pdenom_; }
  uint32_t n_eff() const { return n_eff_; }
  bool trunc_loss() const { return trunc_loss_; }
  bool is_zero() const { return c_.empty(); }
  size_t term_count() const { return c_.size(); }
  const std::map<uint64_t, WittScalar>& terms() const { return c_; }

  void set_term(const Expo& e, const WittScalar& v);  // integral part, pre-normalise
  std::optional<WittScalar> coeff(const Expo& e) const;

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator-() const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries scaled(const WittScalar& s) const;
  // Multiply by p^-k (raises pdenom; precision-neutral).
  TruncatedSeries p_shift_down(uint32_t k) const;
  TruncatedSeries p_shift_up(uint32_t k) const;

  // sigma: Frobenius on coefficients, exponent triples scaled by p.  Triples
  // escaping the degree bound are dropped and flagged.
  TruncatedSeries sigma() const;
  TruncatedSeries sigma_pow(uint32_t k) const;

  // Reduce mod p: requires pdenom == 0 and n_eff >= 1.
  TruncatedSeries reduced_mod_p() const;

  bool equals(const TruncatedSeries& o) const;
  void normalize();

  std::vector<Expo> support() const;

private:
  const WittRing* r_;
  uint32_t deg_;
  std::map<uint64_t, WittScalar> c_;
  uint32_t pdenom_ = 0;
  uint32_t n_eff_;
  bool trunc_loss_ = false;

  void reduce_mod_neff();
  friend class SeriesMat;
};

// Univariate truncated series over the same scalars, coefficients of
// t^0..t^(T-1).  valid_to marks the prefix that is exact: coefficients at
// indices >= valid_to may have lost contributions to truncation.
class UniSeries {
public:
  UniSeries(const WittRing& r, uint32_t tprec)
      : r_(&r), c_(tprec, WittScalar(r, 0, 0)), valid_(tprec), n_eff_(r.n()) {}

  const WittRing& ring() const { return *r_; }
  uint32_t tprec() const { return (uint32_t)c_.size(); }
  uint32_t valid_to() const { return valid_; }
  uint32_t pdenom() const { return pdenom_; }
  uint32_t n_eff() const { return n_eff_; }

  const WittScalar& operator[](size_t i) const { return c_[i]; }
  void set(size_t i, const WittScalar& v) { c_[i] = v; }
  void clamp_valid(uint32_t v) {
    if (v < valid_) valid_ = v;
  }
  void set_pdenom(uint32_t k) { pdenom_ = k; }
  void set_n_eff(uint32_t k) { n_eff_ = k; }

  UniSeries operator+(const UniSeries& o) const;
  UniSeries operator-(const UniSeries& o) const;
  UniSeries operator*(const UniSeries& o) const;
  UniSeries scaled(const WittScalar& s) const;
  UniSeries pow(uint64_t e) const;

  // Lowest index with a stored nonzero coefficient (valid_to if none).
  uint32_t low_index() const;

  // Mod-p fast Frobenius: coefficients^p, exponents scaled by p.  Requires
  // pdenom == 0 and n_eff == 1 (reduction mod p is in force).
  UniSeries frobenius_map() const;

  UniSeries reduced_mod_p() const;

  // Valuation of the mod-p reduction; requires pdenom == 0.
  TVal t_valuation() const;

  bool equals_mod_p(const UniSeries& o) const;

private:
  const WittRing* r_;
  std::vector<WittScalar> c_;
  uint32_t valid_;
  uint32_t pdenom_ = 0;
  uint32_t n_eff_;
};

// Substitute three univariate series for x, y, z.  The input must be
// integral (pdenom handled by the caller).  The result is truncated at the
// t-precision of the coordinate series; its valid prefix accounts both for
// the coordinates' own validity and for monomials the degree bound may have
// discarded from s.
UniSeries substitute_curve(const TruncatedSeries& s, const UniSeries& X, const UniSeries& Y,
                           const UniSeries& Z);

// Dense rectangular matrix of truncated series.
class SeriesMat {
public:
  SeriesMat(const WittRing& r, uint32_t deg_bound, uint32_t rows, uint32_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, TruncatedSeries::zero(r, deg_bound)) {}
  static SeriesMat identity(const WittRing& r, uint32_t deg_bound, uint32_t n);

  uint32_t rows() const { return rows_; }
  uint32_t cols() const { return cols_; }
  TruncatedSeries& at(uint32_t i, uint32_t j) { return e_[i * cols_ + j]; }
  const TruncatedSeries& at(uint32_t i, uint32_t j) const { return e_[i * cols_ + j]; }

  SeriesMat operator+(const SeriesMat& o) const;
  SeriesMat operator-(const SeriesMat& o) const;
  SeriesMat operator*(const SeriesMat& o) const;
  SeriesMat scaled(const WittScalar& s) const;
  SeriesMat p_shift_down(uint32_t k) const;
  SeriesMat sigma() const;
  SeriesMat sigma_pow(uint32_t k) const;
  bool equals(const SeriesMat& o) const;

private:
  uint32_t rows_, cols_;
  std::vector<TruncatedSeries> e_;
};

}  // namespace crysect
