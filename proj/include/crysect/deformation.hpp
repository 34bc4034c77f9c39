#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crysect/admissible.hpp"

namespace crysect {

// Formal curve through the distinguished point, in the normal form
//   x(t) = beta^-1 t^a + sum xt[k] t^(a+1+k)
//   y(t) = -beta  t^b + sum yt[k] t^(b+1+k)
//   z(t) = 2 lambda t^c + sum zt[k] t^(c+1+k)
// with a + b = 2c and beta a unit.  Unlisted tail coefficients are zero; the
// curve is treated as an exact polynomial up to tprec.
struct FormalCurve {
  uint32_t a = 1, b = 1, c = 1;
  WittScalar beta;
  std::vector<WittScalar> xt, yt, zt;
  uint32_t tprec = 64;

  explicit FormalCurve(const WittScalar& be) : beta(be) {}

  // Coordinate series re-homed into rr (which may hold fewer p-digits).
  void coords(const WittRing& rr, uint32_t T, UniSeries& X, UniSeries& Y, UniSeries& Z) const;
};

WittScalar rehome(const WittScalar& s, const WittRing& rr);

// Teichmuller digit residues (entries < p) of the five coordinates.
std::vector<std::array<uint64_t, 5>> digit_residues(const WittRing& r, const SpecialEndo& w);

enum class CurveStratum { Ordinary, AlmostOrdinary, Supersingular };

struct PositionInfo {
  bool abc_equal = false;
  bool case_two = false;   // a = b = c with beta in lambda * F_p^*
  bool supersingular = false;
  // With scalars in this ring the non-special ("general") class cannot occur;
  // see residue_outside_fp2.
};

PositionInfo classify_position(const FormalCurve& cv, const WittRing& modp);

// Whether the residue of s falls outside F_{p^2}.  The coefficient ring only
// carries F_{p^2} residues, so this is constant false; it exists so the
// classifier states its full decision tree and is covered by a unit test.
bool residue_outside_fp2(const WittScalar& s);

// For a = b = c germs: tangent direction proportional to its own p-power.
bool direction_sigma_fixed(const FormalCurve& cv, const WittRing& modp);

// Trivariate divisor of w at level n: first graded component, even part,
// reduced mod p.
TruncatedSeries defo_divisor(uint32_t n, const SpecialEndo& w, const CrystalData& cd);

// The two stratification equations mod p.
TruncatedSeries nonordinary_equation(const CrystalData& cd);
TruncatedSeries extra_supersingular_equation(const CrystalData& cd);

// Tangent directions of the lines cut out by the pair of equations:
// (1,0,0), (0,1,0) and (alpha^-1, -alpha, 2 lambda).  The first flavour
// takes alpha in lambda * F_p^*, the extended one all of F_{p^2}^*.
std::vector<std::array<WittScalar, 3>> supersingular_lines(const WittRing& modp);
std::vector<std::array<WittScalar, 3>> supersingular_lines_ext(const WittRing& modp);

// Restriction of the extra equation to the chart of the cone where x is
// invertible, cleared of denominators: a binary form of degree 2p in (x, z).
// Coefficient k multiplies x^(2p-k) z^k.
std::vector<WittScalar> cone_chart_binary_form(const WittRing& modp);

// Pullback engine along a fixed curve, working mod p with its own one-digit
// ring.  Caches coordinate twists and the pulled-back generator products.
class CurvePullback {
public:
  CurvePullback(const FormalCurve& cv, uint32_t p, uint32_t eps, uint32_t tprec);

  const WittRing& ring() const { return r_; }
  uint32_t tprec() const { return T_; }
  const FormalCurve& curve() const { return cv_; }

  const UniSeries& coord_twist(int which, uint32_t i);
  const UniSeries& alpha_pull(uint32_t i, uint32_t j);
  const UniSeries& beta_pull(uint32_t j);
  // alpha_I beta_J along the curve.
  const UniSeries& core_pull(const std::vector<uint32_t>& I, const std::vector<uint32_t>& J);

  // Pullback of the level-n divisor of the vector with the given digit
  // residues (layer k, coordinate j).  Assembled from the collapsed row
  // entries of the graded blocks; n >= 1.
  UniSeries defo_pull(uint32_t n, const std::vector<std::array<uint64_t, 5>>& dig);

  TVal contact_alpha01();
  TVal contact_beta0();

private:
  FormalCurve cv_;
  WittRing r_;
  uint32_t T_;
  UniSeries x_, y_, z_;
  std::map<std::pair<int, uint32_t>, UniSeries> twists_;
  std::map<std::string, UniSeries> cores_;
  std::map<std::string, UniSeries> trail_full_;
  std::map<uint64_t, std::vector<IndexSystem>> systems_;

  const std::vector<IndexSystem>& systems(uint32_t len, SystemKind kind);
  const UniSeries& trail_scaled_core(const IndexSystem& sys, int which);
};

TVal intersection_multiplicity(CurvePullback& eng, uint32_t n,
                               const std::vector<std::array<uint64_t, 5>>& dig);

struct DecayProfile {
  TVal A = TVal::exact(0);
  TVal B = TVal::exact(0);
  TVal d = TVal::exact(0);
  CurveStratum stratum = CurveStratum::Ordinary;
  PositionInfo position;
  bool refined = false;      // ordinary with finite A, d: e_index and Dq set
  uint32_t e_index = 0;
  bool e_boundary = false;   // (1+p) B equals the switchover value exactly
  TVal Dq = TVal::exact(0);
};

DecayProfile curve_invariants(CurvePullback& eng,
                              const std::vector<std::array<uint64_t, 5>>& dig);

// Closed-form multiplicity at the given level (>= 1) from the profile.
// Lower bounds are reported against tcap where decay stops being visible.
TVal predicted_multiplicity(const DecayProfile& pr, uint32_t level, uint64_t p, uint32_t tcap);

// Closed-form lift degrees of p^n times a basis vector on a generically
// almost-ordinary curve; basis order (w1, w2, w3, w4, w5).
uint64_t ao_basis_lift_degree(uint32_t j, uint32_t n, uint64_t A, uint32_t a, uint32_t b,
                              uint32_t c, uint64_t p);
// Same for the rotated basis (w1, w2, w3', w4', w5) used when a = b = c and
// beta/lambda has residue in F_p^*; e2 = A - a(p+1), even and >= 2.
uint64_t ao_case2_lift_degree(uint32_t j, uint32_t n, uint64_t A, uint32_t a, uint32_t e2,
                              uint64_t p);

struct DecayReport {
  std::vector<std::vector<TVal>> level_mult;  // [level-1][basis index]
  uint32_t certified_levels = 0;
};

DecayReport decay_classify(CurvePullback& eng,
                           const std::vector<std::vector<std::array<uint64_t, 5>>>& basis_digits,
                           uint32_t n_max);

// Predicate ladder attached to tail sequences (f, g, h), all starting at 1.
struct BumpTables {
  std::vector<char> W, X, B;
  std::vector<std::vector<char>> A;  // A[i-1][l] for twist level i >= 1
};
BumpTables bump_predicates(const std::vector<WittScalar>& f, const std::vector<WittScalar>& g,
                           const std::vector<WittScalar>& h, uint32_t imax);

// Sample constructors.
FormalCurve make_line_curve(const WittRing& rr, uint64_t delta,
                            const std::vector<WittScalar>& reparam, uint32_t tprec);
FormalCurve make_cone_curve(const WittRing& rr, uint32_t a, uint32_t b, const WittScalar& beta,
                            const std::vector<WittScalar>& yt, const std::vector<WittScalar>& zt,
                            uint32_t tprec);
FormalCurve make_free_curve(const WittRing& rr, uint32_t a, uint32_t b, const WittScalar& beta,
                            const std::vector<WittScalar>& xt, const std::vector<WittScalar>& yt,
                            const std::vector<WittScalar>& zt, uint32_t tprec);

struct WitnessResult {
  FormalCurve curve;
  uint64_t A = 0, d = 0, B_target = 0;
  TVal B = TVal::exact(0);
  TVal D1 = TVal::exact(0);
  TVal D2 = TVal::exact(0);
  uint32_t tprec = 0;
};

// Constructs a curve whose beta_0 contact lands exactly on the switchover
// value A + p(p-1)d for the vector with the given digit residues, while the
// level-2 divisor is pushed beyond tprec.  tprec 0 selects 3(A + d p^2) plus
// a margin.  The returned curve lives in rr.
WitnessResult witness_curve(const WittRing& rr,
                            const std::vector<std::array<uint64_t, 5>>& dig, uint32_t tprec);

}  // namespace crysect
