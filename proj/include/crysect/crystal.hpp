#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "crysect/series.hpp"

namespace crysect {

// A rank-5 lattice vector in coordinates for the distinguished basis
// (w1..w5); entries are plain residues mod p^N.
struct SpecialEndo {
  std::array<uint64_t, 5> coord{0, 0, 0, 0, 0};
};

// The explicit supersingular-fibre data: Frobenius matrix over the formal
// neighbourhood in the distinguished basis, the unipotent period matrix, the
// generator series alpha/beta and the constant 2x2 contraction matrices, and
// the operative quadratic form.
class CrystalData {
public:
  CrystalData(const WittRing& r, uint32_t deg_bound);

  const WittRing& ring() const { return *r_; }
  uint32_t deg_bound() const { return deg_; }

  WittScalar lambda() const { return WittScalar::lambda(*r_); }
  WittScalar eps_hat() const { return WittScalar(*r_, r_->eps_lift(), 0); }
  WittScalar inv_lambda() const;
  WittScalar inv_2eps() const;
  WittScalar inv_4eps() const;
  WittScalar half() const;  // 1/2

  TruncatedSeries var(int which) const {  // 0:x 1:y 2:z
    return TruncatedSeries::variable(*r_, deg_, which);
  }
  // sigma^i-twisted variable: exponent p^i on the chosen coordinate.
  TruncatedSeries var_twist(int which, uint32_t i) const;

  // x^(p^i) y^(p^j) + x^(p^j) y^(p^i) + z^(p^i) z^(p^j) / (2 eps)
  TruncatedSeries alpha(uint32_t i, uint32_t j) const;
  // x^(p^i) y^(p^i) + z^(2 p^i) / (4 eps)
  TruncatedSeries beta(uint32_t i) const;

  // Constant 2x2 matrix [[(-1)^(i+j), (-1)^(i+1)/L], [(-1)^j L, -1]].
  SeriesMat d_matrix(uint32_t i, uint32_t j) const;

  SeriesMat b_block(uint32_t i) const;  // 3x2
  SeriesMat c_block(uint32_t i) const;  // 2x3
  SeriesMat e_block(uint32_t i) const;  // 2x2 = beta(i) * d_matrix(i,i)

  // F with Frob = (1 + F) sigma in the distinguished basis; rows 1-2 carry a
  // single power of p in the denominator.
  SeriesMat frob_matrix() const;
  // Unipotent period matrix.
  SeriesMat u_matrix() const;
  // p times the v-basis Frobenius matrix (integral); used to re-derive the
  // stratification equations.
  SeriesMat frob_v_matrix() const;

  // Product of (1 + F^[i]) for i < depth; depth 0 selects the automatic
  // cutoff (smallest depth whose next factor cannot touch degrees < D).
  SeriesMat f_infty(uint32_t depth = 0) const;
  uint32_t auto_depth() const;

  // Operative quadratic form on coordinates: -p*eps*c1^2 + p*c2^2 + c3*c4 +
  // eps*c5^2, as an integer upper-triangular matrix and as a ring evaluation.
  std::array<std::array<long long, 5>, 5> q_prime_upper() const;
  WittScalar q_prime_eval(const SpecialEndo& w) const;

  // Teichmuller digit expansion per coordinate: digits[k][j] is the lift of
  // the k-th digit of coordinate j, held mod p^N.
  std::vector<std::array<uint64_t, 5>> digit_table(const SpecialEndo& w) const;

private:
  const WittRing* r_;
  uint32_t deg_;
};

}  // namespace crysect
