#pragma once

#include "crysect/deformation.hpp"
#include "crysect/qlattice.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace crysect {

enum class BasisCase { Standard, Rotated, Eta };

// Per-position basis of the special-endomorphism lattice, as digit tables
// (layer x coordinate) feeding the pullback engine.  Coefficients are
// Teichmuller lifts, so each table has a single nonzero layer:
//   Standard: unit vectors w1..w5 (unequal coordinate exponents);
//   Rotated:  w3' = d^2 e w3 - w4 - d w5, w4' = d^2 e w3 + w4 with d the
//             lambda-part residue of beta (equal exponents, beta in
//             lambda F_p^*);
//   Eta:      w4 replaced by N(beta) w3 + w4 - v w5 (equal exponents,
//             beta with nonzero norm residue u^2 - e v^2).
struct AdaptedBasis {
  BasisCase kind = BasisCase::Standard;
  std::vector<std::vector<std::array<uint64_t, 5>>> digits;  // [j][layer][coord]
};

AdaptedBasis adapted_basis(const FormalCurve& cv, uint64_t p, uint64_t eps, uint32_t layers);

// Valuation vectors of the lifting filtration: at level n the sections
// lifting to order n form (+) p^{e[n-1][j]} . (basis j), read off from
// engine-computed lifting degrees of p^k times each basis vector.
struct Filtration {
  BasisCase basis = BasisCase::Standard;
  std::vector<std::array<uint32_t, 5>> e;
  bool truncated = false;  // some lifting degree was only bounded below n_max
};

Filtration sublattice_filtration(CurvePullback& eng, uint32_t n_max);

// The model form composed with v_j -> p^{e_j} v_j.
QuadLattice scaled_lattice(const QuadLattice& model, const std::array<uint32_t, 5>& e, uint64_t p);

struct LocalIntersection {
  uint64_t value = 0;
  bool complete = false;  // a level with zero representations certified the tail
  uint32_t levels = 0;    // levels with nonzero counts summed
};

// Sum over levels of the number of model vectors of square m surviving to
// that level.  Levels shrink, so the first empty level is a rigorous cutoff.
LocalIntersection local_intersection(CurvePullback& eng, const QuadLattice& model, uint64_t m,
                                     uint32_t n_max);

// A/(p^2-1) |q(m)| against the ambient lattice.
double global_density(uint64_t A, uint64_t p, const QuadLattice& ambient, uint64_t m, double tol);

struct BoundRow {
  uint64_t m = 0;
  uint64_t lP = 0;
  double gP = 0;
  double ratio = 0;
  bool complete = false;
};

struct IntersectionReport {
  std::vector<BoundRow> rows;
  double bound = 0;  // (p-1)^2/(p^2+1)
  uint64_t A = 0;
  uint32_t n_max = 0;
  bool any_truncated = false;
  // Least-squares slope of log slack against log m over rows with positive
  // slack = lP - bound * gP; reported, never asserted here.
  double slack_exponent = 0;
  bool slack_fit_valid = false;
};

IntersectionReport bound_report(CurvePullback& eng, const QuadLattice& model,
                                const QuadLattice& ambient, const std::vector<uint64_t>& ms,
                                uint32_t n_max, double tol);

// Rank-1 boundary stand-in: the w5-line of the filtration alone.  N_R twice
// the number of levels with unscaled generator; past them the level form is
// p-divisible and represents no m prime to p.
struct RankOneBound {
  uint64_t NR = 0;
  std::vector<std::pair<uint64_t, uint64_t>> lR;
  bool complete = false;
  bool ok = false;  // every l_R(m) <= N_R
};

RankOneBound rank_one_bound(CurvePullback& eng, long long q0, const std::vector<uint64_t>& ms,
                            uint32_t n_max);

}  // namespace crysect
