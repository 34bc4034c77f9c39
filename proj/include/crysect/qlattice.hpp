#pragma once

#include "crysect/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace crysect {

// Integral quadratic form on Z^rank, stored upper-triangular:
// Q(v) = sum_{i<=j} upper[i][j] v_i v_j.
struct QuadLattice {
  uint32_t rank = 0;
  std::vector<std::vector<long long>> upper;

  explicit QuadLattice(uint32_t r);

  long long eval(const std::vector<long long>& v) const;
  // Bilinear Gram of (x,y) = Q(x+y) - Q(x) - Q(y); diagonal 2*Q(e_i).
  std::vector<std::vector<long long>> gram_doubled() const;
  __int128 det_doubled() const;
  bool positive_definite() const;
  std::string key() const;
};

QuadLattice ambient_lattice();                          // x0^2 + x1 x2 - x3 x4
QuadLattice q_prime_lattice(uint64_t p, uint64_t eps);  // -pe x1^2 + p x2^2 + x3 x4 + e x5^2
// Positive-definite stand-in with the same p-part data as q_prime: the split
// binary block x3^2 + x3 x4 + k x4^2 has discriminant 1-4k chosen a nonzero
// square mod p.  Genus correctness away from p is not claimed.
QuadLattice toy_lattice(uint64_t p, uint64_t eps);

// r(m) = #{v in Z^rank : Q(v) = m} for all 0 <= m <= mmax in one enumeration.
std::vector<uint64_t> representation_histogram(const QuadLattice& L, uint64_t mmax);
uint64_t count_representations(const QuadLattice& L, uint64_t m);

// Value histogram of Q over (Z/l^a)^rank, computed blockwise on the orthogonal
// components of the cross-term graph and combined by cyclic convolution.
// Cached per (form, l, a); guarded by a point budget.
const std::vector<uint64_t>& residue_histogram(const QuadLattice& L, uint64_t l, uint32_t a);
void clear_residue_cache();

// l^{a(1-rank)} * #{v mod l^a : Q(v) = m mod l^a}, exact.
Rat local_density_limit(const QuadLattice& L, uint64_t l, uint64_t m, uint32_t a);
// Increases a from a valuation-based start until two consecutive levels agree.
Rat local_density_stabilized(const QuadLattice& L, uint64_t l, uint64_t m);
// p odd, gcd(p, m) = 1: the level-1 value p^{1-rank} N_1(m).
Rat local_density_hanke(const QuadLattice& L, uint64_t p, uint64_t m);

int kronecker(long long a, long long n);
// sum_{n>=1} kronecker(D,n)/n^2 with absolute tail bound below tol; D = 0,1 mod 4.
double dirichlet_L2(long long D, double tol);

// Weight-5/2 Eisenstein coefficient for a rank-5 even lattice:
//   -16 sqrt(2) pi^2 m^{3/2} L(2,chi_D) / (2 sqrt(det) zeta(4))
//     * sum_{d|f} mu(d) chi_D(d) d^{-2} sigma_{-3}(f/d)
//     * prod_{l | 2 det} delta(l,L,m)/(1-l^{-4})
// where m = m0 f^2 with gcd(f, 2 det) = 1, v_l(m0) <= 1 off 2 det, and
// D = -2 m0 det.  Densities and the divisor sum stay exact; the L-value and
// prefactor are floating point with tail bound tol.
double eisenstein_coeff(const QuadLattice& L, uint64_t m, double tol);

// delta(p, Lppp, m) [1 - (m/p) p^{-2}] / (sqrt|disc_p| (1 - p^{-4})), the
// p-local quotient of two Eisenstein coefficients sharing all other places.
double eisenstein_ratio(const QuadLattice& Lppp, uint64_t p, uint64_t m);

}  // namespace crysect
