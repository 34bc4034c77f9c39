#include "crysect/deformation.hpp"

#include <algorithm>
#include <sstream>

namespace crysect {

WittScalar rehome(const WittScalar& s, const WittRing& rr) {
  return WittScalar(rr, s.a() % rr.modulus(), s.b() % rr.modulus());
}

void FormalCurve::coords(const WittRing& rr, uint32_t T, UniSeries& X, UniSeries& Y,
                         UniSeries& Z) const {
  if (a + b != 2 * c) throw ConfigError("curve exponents must satisfy a + b = 2c");
  if (c >= T || a >= T || b >= T) throw ConfigError("t-precision below the leading exponents");
  X = UniSeries(rr, T);
  Y = UniSeries(rr, T);
  Z = UniSeries(rr, T);
  X.set(a, rehome(beta.inverse(), rr));
  Y.set(b, -rehome(beta, rr));
  Z.set(c, WittScalar(rr, 0, rr.add(2 % rr.modulus(), 0)));
  for (size_t k = 0; k < xt.size() && a + 1 + k < T; ++k) X.set(a + 1 + k, rehome(xt[k], rr));
  for (size_t k = 0; k < yt.size() && b + 1 + k < T; ++k) Y.set(b + 1 + k, rehome(yt[k], rr));
  for (size_t k = 0; k < zt.size() && c + 1 + k < T; ++k) Z.set(c + 1 + k, rehome(zt[k], rr));
}

std::vector<std::array<uint64_t, 5>> digit_residues(const WittRing& r, const SpecialEndo& w) {
  std::vector<std::array<uint64_t, 5>> out(r.n());
  for (int j = 0; j < 5; ++j) {
    std::vector<uint64_t> dg = teichmuller_digits(r, w.coord[j] % r.modulus());
    for (uint32_t k = 0; k < r.n(); ++k) out[k][j] = dg[k] % r.p();
  }
  return out;
}

PositionInfo classify_position(const FormalCurve& cv, const WittRing& modp) {
  PositionInfo info;
  info.abc_equal = cv.a == cv.b && cv.b == cv.c;
  WittScalar bb = rehome(cv.beta, modp);
  if (!bb.is_unit()) throw ConfigError("curve leading unit degenerates mod p");
  bool lambda_ratio = bb.a() % modp.p() == 0 && bb.b() % modp.p() != 0;
  info.case_two = info.abc_equal && lambda_ratio;
  info.supersingular = !info.abc_equal || info.case_two;
  return info;
}

bool residue_outside_fp2(const WittScalar&) { return false; }

bool direction_sigma_fixed(const FormalCurve& cv, const WittRing& modp) {
  WittScalar bb = rehome(cv.beta, modp);
  std::array<WittScalar, 3> dir = {bb.inverse(), -bb, WittScalar(modp, 0, 2 % modp.modulus())};
  WittScalar ratio = dir[0].frobenius() * dir[0].inverse();
  for (int i = 1; i < 3; ++i)
    if (!(dir[i].frobenius() == ratio * dir[i])) return false;
  return true;
}

TruncatedSeries defo_divisor(uint32_t n, const SpecialEndo& w, const CrystalData& cd) {
  return g_series(n, Star::Even, w, cd)[0].reduced_mod_p();
}

TruncatedSeries nonordinary_equation(const CrystalData& cd) {
  return cd.beta(0).reduced_mod_p();
}

TruncatedSeries extra_supersingular_equation(const CrystalData& cd) {
  return cd.alpha(0, 1).reduced_mod_p();
}

std::vector<std::array<WittScalar, 3>> supersingular_lines(const WittRing& modp) {
  WittScalar one = WittScalar::from_int(modp, 1), zero = WittScalar::from_int(modp, 0);
  WittScalar twol(modp, 0, 2 % modp.modulus());
  std::vector<std::array<WittScalar, 3>> out;
  out.push_back({one, zero, zero});
  out.push_back({zero, one, zero});
  for (uint64_t d = 1; d < modp.p(); ++d) {
    WittScalar al(modp, 0, d);
    out.push_back({al.inverse(), -al, twol});
  }
  return out;
}

std::vector<std::array<WittScalar, 3>> supersingular_lines_ext(const WittRing& modp) {
  WittScalar one = WittScalar::from_int(modp, 1), zero = WittScalar::from_int(modp, 0);
  WittScalar twol(modp, 0, 2 % modp.modulus());
  std::vector<std::array<WittScalar, 3>> out;
  out.push_back({one, zero, zero});
  out.push_back({zero, one, zero});
  for (uint64_t u = 0; u < modp.p(); ++u)
    for (uint64_t v = 0; v < modp.p(); ++v) {
      if (u == 0 && v == 0) continue;
      WittScalar al(modp, u, v);
      out.push_back({al.inverse(), -al, twol});
    }
  return out;
}

std::vector<WittScalar> cone_chart_binary_form(const WittRing& modp) {
  uint64_t p = modp.p();
  WittScalar four_eps(modp, modp.mul(4 % modp.modulus(), modp.eps_lift()), 0);
  WittScalar inv4 = four_eps.inverse();
  WittScalar inv2 = (WittScalar::from_int(modp, 2) * WittScalar(modp, modp.eps_lift(), 0)).inverse();
  std::vector<WittScalar> c(2 * p + 1, WittScalar::from_int(modp, 0));
  c[2] = c[2] - inv4;
  c[2 * p] = c[2 * p] - inv4.pow(p);
  c[p + 1] = c[p + 1] + inv2;
  return c;
}

CurvePullback::CurvePullback(const FormalCurve& cv, uint32_t p, uint32_t eps, uint32_t tprec)
    : cv_(cv), r_(p, 1, eps), T_(tprec), x_(r_, 1), y_(r_, 1), z_(r_, 1) {
  if (tprec > cv.tprec) throw ConfigError("engine t-precision exceeds curve validity");
  cv_.coords(r_, T_, x_, y_, z_);
}

const UniSeries& CurvePullback::coord_twist(int which, uint32_t i) {
  auto key = std::make_pair(which, i);
  auto it = twists_.find(key);
  if (it != twists_.end()) return it->second;
  if (i == 0) {
    const UniSeries& base = which == 0 ? x_ : which == 1 ? y_ : z_;
    return twists_.emplace(key, base).first->second;
  }
  UniSeries v = coord_twist(which, i - 1).frobenius_map();
  return twists_.emplace(key, std::move(v)).first->second;
}

const UniSeries& CurvePullback::alpha_pull(uint32_t i, uint32_t j) {
  std::string key = "a" + std::to_string(i) + "_" + std::to_string(j);
  auto it = cores_.find(key);
  if (it != cores_.end()) return it->second;
  WittScalar inv2eps =
      (WittScalar::from_int(r_, 2) * WittScalar(r_, r_.eps_lift(), 0)).inverse();
  UniSeries v = coord_twist(0, i) * coord_twist(1, j) + coord_twist(0, j) * coord_twist(1, i) +
                (coord_twist(2, i) * coord_twist(2, j)).scaled(inv2eps);
  return cores_.emplace(key, std::move(v)).first->second;
}

const UniSeries& CurvePullback::beta_pull(uint32_t j) {
  std::string key = "b" + std::to_string(j);
  auto it = cores_.find(key);
  if (it != cores_.end()) return it->second;
  WittScalar inv4eps =
      (WittScalar::from_int(r_, 4) * WittScalar(r_, r_.eps_lift(), 0)).inverse();
  UniSeries v = coord_twist(0, j) * coord_twist(1, j) +
                (coord_twist(2, j) * coord_twist(2, j)).scaled(inv4eps);
  return cores_.emplace(key, std::move(v)).first->second;
}

static std::string core_key(const std::vector<uint32_t>& I, const std::vector<uint32_t>& J) {
  std::ostringstream os;
  os << "c";
  for (uint32_t k : I) os << "i" << k;
  for (uint32_t k : J) os << "j" << k;
  return os.str();
}

const UniSeries& CurvePullback::core_pull(const std::vector<uint32_t>& I,
                                          const std::vector<uint32_t>& J) {
  std::string key = core_key(I, J);
  auto it = cores_.find(key);
  if (it != cores_.end()) return it->second;
  UniSeries v(r_, T_);
  v.set(0, WittScalar::from_int(r_, 1));
  for (size_t t = 0; t + 1 < I.size(); t += 2) v = v * alpha_pull(I[t], I[t + 1]);
  for (uint32_t j : J) v = v * beta_pull(j);
  return cores_.emplace(key, std::move(v)).first->second;
}

const std::vector<IndexSystem>& CurvePullback::systems(uint32_t len, SystemKind kind) {
  uint64_t key = (uint64_t)len * 4 + (uint64_t)kind;
  auto it = systems_.find(key);
  if (it != systems_.end()) return it->second;
  uint32_t mab = std::min(cv_.a, std::min(cv_.b, cv_.c));
  uint64_t degcap = (uint64_t)T_ / std::max<uint32_t>(mab, 1) + 1;
  std::vector<IndexSystem> v = enumerate_systems(len, Star::Even, kind, r_.p(), degcap);
  return systems_.emplace(key, std::move(v)).first->second;
}

const UniSeries& CurvePullback::trail_scaled_core(const IndexSystem& sys, int which) {
  std::string key = core_key(sys.I, sys.J) + "t" + std::to_string(*sys.trail) + "w" +
                    std::to_string(which);
  auto it = trail_full_.find(key);
  if (it != trail_full_.end()) return it->second;
  UniSeries v = sys.core_empty() ? coord_twist(which, *sys.trail)
                                 : core_pull(sys.I, sys.J) * coord_twist(which, *sys.trail);
  return trail_full_.emplace(key, std::move(v)).first->second;
}

UniSeries CurvePullback::defo_pull(uint32_t n, const std::vector<std::array<uint64_t, 5>>& dig) {
  if (n == 0) throw ConfigError("level must be >= 1");
  UniSeries acc(r_, T_);
  WittScalar one = WittScalar::from_int(r_, 1);
  WittScalar m2 = WittScalar::from_int(r_, -2);
  WittScalar invlam = WittScalar::lambda(r_).inverse();
  auto sgn = [&](uint32_t e) { return e % 2 == 0 ? one : -one; };

  for (uint32_t k = 0; k < dig.size(); ++k) {
    uint32_t L = n + k;
    uint64_t d0 = dig[k][0], d1 = dig[k][1];
    if (d0 || d1) {
      WittScalar s0(r_, d0 % r_.p(), 0), s1(r_, d1 % r_.p(), 0);
      for (const IndexSystem& sys : systems(L, SystemKind::IJ)) {
        uint32_t mn = sys.core_min(), mx = sys.core_max();
        WittScalar sc = m2.pow(L - 1) * (sgn(mn + mx) * s0 + sgn(mn + 1) * invlam * s1);
        if (sc.is_zero()) continue;
        acc = acc + core_pull(sys.I, sys.J).scaled(sc);
      }
    }
    if (dig[k][2] || dig[k][3] || dig[k][4]) {
      for (const IndexSystem& sys : systems(L, SystemKind::IJTrail)) {
        WittScalar s = m2.pow(L - 1) * sgn(sys.min_index()) * invlam;
        for (int cidx = 0; cidx < 3; ++cidx) {
          uint64_t dw = dig[k][2 + cidx];
          if (!dw) continue;
          acc = acc + trail_scaled_core(sys, cidx).scaled(s * WittScalar(r_, dw % r_.p(), 0));
        }
      }
    }
  }
  return acc;
}

TVal CurvePullback::contact_alpha01() { return alpha_pull(0, 1).t_valuation(); }
TVal CurvePullback::contact_beta0() { return beta_pull(0).t_valuation(); }

TVal intersection_multiplicity(CurvePullback& eng, uint32_t n,
                               const std::vector<std::array<uint64_t, 5>>& dig) {
  return eng.defo_pull(n, dig).t_valuation();
}

DecayProfile curve_invariants(CurvePullback& eng,
                              const std::vector<std::array<uint64_t, 5>>& dig) {
  DecayProfile pr;
  pr.A = eng.contact_alpha01();
  pr.B = eng.contact_beta0();
  pr.d = eng.defo_pull(1, dig).t_valuation();
  pr.position = classify_position(eng.curve(), eng.ring());
  if (pr.B.at_least)
    pr.stratum = pr.A.at_least ? CurveStratum::Supersingular : CurveStratum::AlmostOrdinary;
  else
    pr.stratum = CurveStratum::Ordinary;

  if (pr.stratum == CurveStratum::Ordinary && !pr.A.at_least && !pr.d.at_least) {
    unsigned __int128 p = eng.ring().p();
    unsigned __int128 lhs = p * (1 + p) * (unsigned __int128)pr.B.v;
    unsigned __int128 A = (unsigned __int128)pr.A.v, d = (unsigned __int128)pr.d.v;
    auto switch_value = [&](uint32_t e) {
      unsigned __int128 p2e = 1;
      for (uint32_t i = 0; i < 2 * e; ++i) p2e *= p;
      return A * (p + p2e) + p2e * (p * p - 1) * d;
    };
    if (switch_value(0) <= lhs) {
      uint32_t e = 0;
      while (switch_value(e + 1) <= lhs) ++e;
      pr.e_index = e;
      pr.e_boundary = switch_value(e) == lhs;
      pr.Dq = eng.defo_pull(e + 1, dig).t_valuation();
      pr.refined = true;
    }
  }
  return pr;
}

static uint64_t geom_sum(uint64_t base, uint32_t terms) {
  uint64_t s = 0, v = 1;
  for (uint32_t i = 0; i < terms; ++i) {
    s += v;
    v *= base;
  }
  return s;
}

static uint64_t upow(uint64_t b, uint32_t e) {
  uint64_t v = 1;
  for (uint32_t i = 0; i < e; ++i) v *= b;
  return v;
}

TVal predicted_multiplicity(const DecayProfile& pr, uint32_t level, uint64_t p, uint32_t tcap) {
  if (level == 0) throw ConfigError("level must be >= 1");
  if (level == 1) return pr.d;
  uint32_t k = level - 1;
  switch (pr.stratum) {
    case CurveStratum::Supersingular:
      return TVal::lower_bound(tcap);
    case CurveStratum::AlmostOrdinary: {
      if (pr.A.at_least || pr.d.at_least) return TVal::lower_bound(tcap);
      uint64_t v = (uint64_t)pr.A.v * geom_sum(p * p, k) + (uint64_t)pr.d.v * upow(p, 2 * k);
      return TVal::exact((long)v);
    }
    case CurveStratum::Ordinary: {
      if (!pr.refined) throw ConfigError("ordinary profile lacks a switchover index");
      if (k < pr.e_index) {
        uint64_t v = (uint64_t)pr.A.v * geom_sum(p * p, k) + (uint64_t)pr.d.v * upow(p, 2 * k);
        return TVal::exact((long)v);
      }
      if (pr.Dq.at_least) return TVal::lower_bound(tcap);
      uint64_t v =
          (uint64_t)pr.B.v * geom_sum(p, k - pr.e_index) + (uint64_t)pr.Dq.v * upow(p, k - pr.e_index);
      return TVal::exact((long)v);
    }
  }
  throw ConfigError("unreachable");
}

uint64_t ao_basis_lift_degree(uint32_t j, uint32_t n, uint64_t A, uint32_t a, uint32_t b,
                              uint32_t c, uint64_t p) {
  uint64_t An = A * geom_sum(p * p, n + 1);        // A (1 + p^2 + ... + p^(2n))
  uint64_t Anm1 = n == 0 ? 0 : A * geom_sum(p * p, n);
  switch (j) {
    case 0:
    case 1:
      return An;
    case 2:
      return Anm1 + (uint64_t)a * upow(p, 2 * n);
    case 3:
      return Anm1 + (uint64_t)b * upow(p, 2 * n);
    case 4:
      return Anm1 + (uint64_t)c * upow(p, 2 * n);
  }
  throw ConfigError("basis index out of range");
}

uint64_t ao_case2_lift_degree(uint32_t j, uint32_t n, uint64_t A, uint32_t a, uint32_t e2,
                              uint64_t p) {
  if (e2 % 2 != 0 || e2 < 2) throw ConfigError("rotation defect must be even and >= 2");
  uint64_t An = A * geom_sum(p * p, n + 1);
  uint64_t Anm1 = n == 0 ? 0 : A * geom_sum(p * p, n);
  switch (j) {
    case 0:
    case 1:
      return An;
    case 2:
      return Anm1 + (uint64_t)(a + e2) * upow(p, 2 * n);
    case 3:
      return Anm1 + (uint64_t)(a + e2 / 2) * upow(p, 2 * n);
    case 4:
      return Anm1 + (uint64_t)a * upow(p, 2 * n);
  }
  throw ConfigError("basis index out of range");
}

DecayReport decay_classify(CurvePullback& eng,
                           const std::vector<std::vector<std::array<uint64_t, 5>>>& basis_digits,
                           uint32_t n_max) {
  DecayReport rep;
  for (uint32_t lvl = 1; lvl <= n_max; ++lvl) {
    std::vector<TVal> row;
    for (const auto& dig : basis_digits) row.push_back(eng.defo_pull(lvl, dig).t_valuation());
    rep.level_mult.push_back(std::move(row));
  }
  rep.certified_levels = n_max;
  return rep;
}

BumpTables bump_predicates(const std::vector<WittScalar>& f, const std::vector<WittScalar>& g,
                           const std::vector<WittScalar>& h, uint32_t imax) {
  if (f.empty() || f.size() != g.size() || g.size() != h.size())
    throw ConfigError("tail sequences must be nonempty and of equal length");
  const WittRing& r = f[0].ring();
  WittScalar one = WittScalar::from_int(r, 1), two = WittScalar::from_int(r, 2);
  if (!(f[0] == one) || !(g[0] == one) || !(h[0] == one))
    throw ConfigError("tail sequences must start at 1");

  size_t L = f.size();
  BumpTables bt;
  bt.W.resize(L);
  bt.X.resize(L);
  bt.B.resize(L);
  bt.A.assign(imax, std::vector<char>(L, 0));

  auto frob_i = [&](WittScalar v, uint32_t i) {
    for (uint32_t t = 0; t < i; ++t) v = v.frobenius();
    return v;
  };

  for (size_t k = 0; k < L; ++k) {
    bt.W[k] = (two * h[k] - f[k] - g[k]).is_zero();
    bt.X[k] = (f[k] - g[k]).is_zero();
  }
  for (size_t l = 0; l < L; ++l) {
    WittScalar s = WittScalar::from_int(r, 0);
    for (size_t k = 0; k <= l; ++k) s = s + h[k] * h[l - k] - f[k] * g[l - k];
    bt.B[l] = s.is_zero();
  }
  for (uint32_t i = 1; i <= imax; ++i) {
    uint64_t pi = upow(r.p(), i);
    for (size_t l = 0; l < L; ++l) {
      WittScalar s = WittScalar::from_int(r, 0);
      for (size_t k = 0; k * pi <= l; ++k) {
        size_t rest = l - k * pi;
        s = s + two * frob_i(h[k], i) * h[rest] - frob_i(f[k], i) * g[rest] -
            frob_i(g[k], i) * f[rest];
      }
      bt.A[i - 1][l] = s.is_zero();
    }
  }
  return bt;
}

FormalCurve make_line_curve(const WittRing& rr, uint64_t delta,
                            const std::vector<WittScalar>& reparam, uint32_t tprec) {
  if (delta % rr.p() == 0) throw ConfigError("line parameter must be a unit");
  WittScalar beta(rr, 0, delta % rr.modulus());
  FormalCurve cv(beta);
  cv.a = cv.b = cv.c = 1;
  cv.tprec = UINT32_MAX;
  (void)tprec;
  WittScalar binv = beta.inverse();
  WittScalar twol(rr, 0, 2 % rr.modulus());
  for (const WittScalar& u : reparam) {
    cv.xt.push_back(binv * u);
    cv.yt.push_back(-beta * u);
    cv.zt.push_back(twol * u);
  }
  return cv;
}

FormalCurve make_cone_curve(const WittRing& rr, uint32_t a, uint32_t b, const WittScalar& beta,
                            const std::vector<WittScalar>& yt, const std::vector<WittScalar>& zt,
                            uint32_t tprec) {
  if ((a + b) % 2 != 0) throw ConfigError("leading exponents must have even sum");
  uint32_t c = (a + b) / 2;
  uint32_t T = tprec;
  if (b >= T || c >= T || a >= T) throw ConfigError("t-precision too small");

  WittScalar zero = WittScalar::from_int(rr, 0);
  std::vector<WittScalar> Y(T, zero), Z(T, zero);
  Y[b] = -rehome(beta, rr);
  for (size_t k = 0; k < yt.size() && b + 1 + k < T; ++k) Y[b + 1 + k] = yt[k];
  Z[c] = WittScalar(rr, 0, 2 % rr.modulus());
  for (size_t k = 0; k < zt.size() && c + 1 + k < T; ++k) Z[c + 1 + k] = zt[k];

  // W = -z^2/(4 eps); then x = W / y keeps the product on the cone.
  WittScalar inv4eps = (WittScalar::from_int(rr, 4) * WittScalar(rr, rr.eps_lift(), 0)).inverse();
  std::vector<WittScalar> W(T, zero);
  for (uint32_t i = c; i < T; ++i)
    for (uint32_t j = c; i + j < T; ++j) W[i + j] = W[i + j] - Z[i] * Z[j] * inv4eps;

  std::vector<WittScalar> X(T, zero);
  WittScalar ylead_inv = Y[b].inverse();
  for (uint32_t m = a + b; m < T; ++m) {
    WittScalar s = W[m];
    for (uint32_t i = a; i < m - b; ++i) s = s - X[i] * Y[m - i];
    X[m - b] = s * ylead_inv;
  }

  FormalCurve cv(rehome(beta, rr));
  cv.a = a;
  cv.b = b;
  cv.c = c;
  cv.tprec = T;
  if (!(X[a] == cv.beta.inverse())) throw ConfigError("cone division lost the normal form");
  for (uint32_t k = a + 1; k < T; ++k) cv.xt.push_back(X[k]);
  for (size_t k = 0; k < yt.size(); ++k) cv.yt.push_back(yt[k]);
  for (size_t k = 0; k < zt.size(); ++k) cv.zt.push_back(zt[k]);
  return cv;
}

FormalCurve make_free_curve(const WittRing& rr, uint32_t a, uint32_t b, const WittScalar& beta,
                            const std::vector<WittScalar>& xt, const std::vector<WittScalar>& yt,
                            const std::vector<WittScalar>& zt, uint32_t tprec) {
  if ((a + b) % 2 != 0) throw ConfigError("leading exponents must have even sum");
  FormalCurve cv(rehome(beta, rr));
  cv.a = a;
  cv.b = b;
  cv.c = (a + b) / 2;
  cv.xt = xt;
  cv.yt = yt;
  cv.zt = zt;
  cv.tprec = tprec;
  return cv;
}

WitnessResult witness_curve(const WittRing& rr,
                            const std::vector<std::array<uint64_t, 5>>& dig, uint32_t tprec) {
  uint32_t p = (uint32_t)rr.p();
  uint32_t eps = (uint32_t)rr.eps();

  // Leading unit with beta^(p-1) away from +-1; the condition only involves
  // the residue, so the search runs in a throwaway one-digit ring.
  WittScalar beta = WittScalar::from_int(rr, 1);
  {
    WittRing r1(p, 1, eps);
    bool found = false;
    for (uint64_t v = 1; v < p && !found; ++v)
      for (uint64_t u = 0; u < p && !found; ++u) {
        WittScalar cand(r1, u, v);
        WittScalar w = cand.pow(p - 1);
        WittScalar one = WittScalar::from_int(r1, 1);
        if (!(w == one) && !(w == -one)) {
          beta = WittScalar(rr, u, v);
          found = true;
        }
      }
    if (!found) throw ConfigError("no leading unit with the required twist");
  }

  uint64_t A = p + 1;
  uint32_t k0 = 0;
  {
    bool any = false;
    for (uint32_t k = 0; k < dig.size() && !any; ++k)
      for (int j = 0; j < 5; ++j)
        if (dig[k][j]) {
          k0 = k;
          any = true;
          break;
        }
    if (!any) throw ConfigError("zero vector has no divisor");
  }
  uint64_t d;
  if (dig[k0][0] || dig[k0][1])
    d = A * geom_sum((uint64_t)p * p, k0 + 1);
  else
    d = (k0 == 0 ? 0 : A * geom_sum((uint64_t)p * p, k0)) + upow(p, 2 * k0);

  uint64_t B_target = A + (uint64_t)p * (p - 1) * d;
  uint32_t T = tprec ? tprec : (uint32_t)(3 * (A + d * p * p) + 8);

  FormalCurve cv(-beta);  // normal form: x leading -beta^-1, y leading +beta
  cv.a = cv.b = cv.c = 1;
  cv.tprec = T;
  cv.xt.assign(T, WittScalar::from_int(rr, 0));

  {
    CurvePullback eng(cv, p, eps, T);
    TVal A0 = eng.contact_alpha01();
    if (A0.at_least || (uint64_t)A0.v != A)
      throw ConfigError("witness base curve misses the expected first contact");
    TVal d0 = eng.defo_pull(1, dig).t_valuation();
    if (d0.at_least || (uint64_t)d0.v != d)
      throw ConfigError("witness base curve misses the expected divisor degree");
  }

  // Kill the level-2 coefficients degree by degree; the slot for step n is
  // the tail coefficient of t^(n+1) in x, acting at degree n + 2 + p d.
  for (uint64_t n = B_target - 2; n + 2 + p * d < T; ++n) {
    uint64_t g = n + 2 + p * d;
    uint32_t slot = (uint32_t)(n - 1);
    auto coeff_at = [&](const WittScalar& trial) {
      cv.xt[slot] = trial;
      CurvePullback eng(cv, p, eps, T);
      return rehome(eng.defo_pull(2, dig)[g], rr);
    };
    WittScalar v0 = coeff_at(WittScalar::from_int(rr, 0));
    WittScalar v1 = coeff_at(WittScalar::from_int(rr, 1));
    WittScalar slope = v1 - v0;
    if (!slope.is_unit()) throw ConfigError("witness solve lost its unit slope");
    cv.xt[slot] = -v0 * slope.inverse();
  }

  WitnessResult res{cv, A, d, B_target, TVal::exact(0), TVal::exact(0), TVal::exact(0), T};
  CurvePullback eng(cv, p, eps, T);
  res.B = eng.contact_beta0();
  UniSeries d1 = eng.defo_pull(1, dig);
  res.D1 = d1.t_valuation();
  res.D2 = eng.defo_pull(2, dig).t_valuation();

  // Cross-check the solved switchover coefficient against its closed form.
  if (!res.D1.at_least && !res.B.at_least && (uint64_t)res.B.v == B_target) {
    WittScalar s = d1[(size_t)res.D1.v];
    WittScalar w = rehome(beta, eng.ring()).pow(p - 1);
    WittScalar alead = -(w.inverse() + w + WittScalar::from_int(eng.ring(), 2));
    WittScalar expect = alead * s.pow((uint64_t)p * p - p);
    WittScalar got = eng.beta_pull(0)[(size_t)B_target];
    if (!(got == expect)) throw ConfigError("witness switchover coefficient off closed form");
  }
  return res;
}

}  // namespace crysect
