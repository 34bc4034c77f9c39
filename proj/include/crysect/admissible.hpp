#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "crysect/crystal.hpp"

namespace crysect {

enum class Star { Even, Odd, Void };
enum class SystemKind { IJ, LeadIJ, IJTrail, LeadIJTrail };

// Index data selecting one factor of the expanded Frobenius product: an
// optional lead index, the interleaved pair-set I (even size), the single
// set J, and an optional trail index.  I and J are kept strictly ascending.
struct IndexSystem {
  std::optional<uint32_t> lead;
  std::vector<uint32_t> I;
  std::vector<uint32_t> J;
  std::optional<uint32_t> trail;

  SystemKind kind() const {
    if (lead && trail) return SystemKind::LeadIJTrail;
    if (lead) return SystemKind::LeadIJ;
    if (trail) return SystemKind::IJTrail;
    return SystemKind::IJ;
  }
  uint32_t length() const {
    return (uint32_t)J.size() + (uint32_t)I.size() / 2 + (trail ? 1u : 0u);
  }
  bool core_empty() const { return I.empty() && J.empty(); }
  // Smallest / largest index present, counting lead and trail.
  uint32_t min_index() const;
  uint32_t max_index() const;
  // Smallest / largest over I union J alone; valid only when the core is
  // nonempty.
  uint32_t core_min() const;
  uint32_t core_max() const;
  // Total degree of the attached product: sum p^k over I, 2 p^k over J,
  // plus p^lead and p^trail.
  uint64_t min_degree(uint64_t p) const;
  bool star_matches(Star s) const {
    if (s == Star::Void) return true;
    return (min_index() % 2 == 0) == (s == Star::Even);
  }

  bool operator<(const IndexSystem& o) const;
  std::string str() const;
};

bool is_admissible(const IndexSystem& sys);

// All admissible systems of the given kind and length whose product degree
// stays below degree_cap, in a fixed deterministic order.
std::vector<IndexSystem> enumerate_systems(uint32_t length, Star star, SystemKind kind,
                                           uint64_t p, uint64_t degree_cap);

// alpha_{i1,i2} alpha_{i3,i4} ... over consecutive pairs of I (1 if empty).
TruncatedSeries alpha_prod(const std::vector<uint32_t>& I, const CrystalData& cd);
// beta_{j1} beta_{j2} ... (1 if empty).
TruncatedSeries beta_prod(const std::vector<uint32_t>& J, const CrystalData& cd);

// The matrix product attached to a system, assembled factor by factor from
// the C/B/E blocks (lead prepends a B factor, trail appends a C factor).
// Shapes: 2x2, 3x2, 2x3, 3x3 by kind.
SeriesMat a_product(const IndexSystem& sys, const CrystalData& cd);

// Collapsed form of the 2x2 product for a nonempty (I, J):
// (-2)^(len-1) alpha_I beta_J D_{min,max}.
SeriesMat closed_form_a(const std::vector<uint32_t>& I, const std::vector<uint32_t>& J,
                        const CrystalData& cd);

// The degree-n graded block of the Frobenius product, star-filtered, as a
// 5x5 matrix scaled by 2^-n: the four corners collect the length-n systems
// of the four kinds.  Requires n >= 1.
SeriesMat f_block(uint32_t n, Star star, const CrystalData& cd);

// Boundary term completing the graded expansion: identity plus the sum of
// single-lead factors in the lower-left corner.
SeriesMat f_zero_block(const CrystalData& cd);

// Row of five series giving the graded pieces of the image of w under the
// expanded product: digit column k of w is pushed through f_block(n+k, star)
// and the contributions are summed over k < N.
std::array<TruncatedSeries, 5> g_series(uint32_t n, Star star, const SpecialEndo& w,
                                        const CrystalData& cd);

// Same values rebuilt through the level-m reduction: every component at
// level n is expressed through the first component at level m (even part)
// twisted and multiplied by generator products.  Requires 1 <= m <= n.
std::array<TruncatedSeries, 5> g_series_recursive(uint32_t n, Star star, const SpecialEndo& w,
                                                  uint32_t m, const CrystalData& cd);

}  // namespace crysect
