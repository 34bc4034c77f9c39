#include "crysect/intersection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace crysect {

AdaptedBasis adapted_basis(const FormalCurve& cv, uint64_t p, uint64_t eps, uint32_t layers) {
  WittRing modp((uint32_t)p, 1, (uint32_t)eps);
  PositionInfo pos = classify_position(cv, modp);
  AdaptedBasis out;
  out.digits.assign(5, std::vector<std::array<uint64_t, 5>>(layers, {0, 0, 0, 0, 0}));
  for (uint32_t j = 0; j < 5; ++j) out.digits[j][0][j] = 1;
  uint64_t u = cv.beta.a() % p;
  uint64_t v = cv.beta.b() % p;
  if (!pos.abc_equal) {
    out.kind = BasisCase::Standard;
  } else if (pos.case_two) {
    out.kind = BasisCase::Rotated;
    uint64_t d2e = v * v % p * eps % p;
    out.digits[2][0] = {0, 0, d2e, p - 1, p - v};
    out.digits[3][0] = {0, 0, d2e, 1, 0};
  } else {
    out.kind = BasisCase::Eta;
    uint64_t nrm = (u * u % p + p - v * v % p * eps % p) % p;
    out.digits[3][0] = {0, 0, nrm, 1, v == 0 ? 0 : p - v};
  }
  return out;
}

namespace {

// Lifting degrees of p^k . (basis j), probed lazily and cached.  A bound
// already at or past the queried order answers definitively; a shorter
// bound taints the filtration instead of guessing.
struct LiftProbe {
  CurvePullback& eng;
  const AdaptedBasis& ab;
  bool truncated = false;
  std::map<std::pair<uint32_t, uint32_t>, TVal> cache;

  TVal degree(uint32_t j, uint32_t k) {
    auto key = std::make_pair(j, k);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, intersection_multiplicity(eng, k + 1, ab.digits[j])).first;
    return it->second;
  }

  bool lifts_to(uint32_t j, uint32_t k, uint32_t n) {
    TVal tv = degree(j, k);
    if (!tv.at_least) return (uint32_t)tv.v >= n;
    if ((uint32_t)tv.v >= n) return true;
    truncated = true;
    return true;
  }
};

}  // namespace

Filtration sublattice_filtration(CurvePullback& eng, uint32_t n_max) {
  if (n_max == 0) throw ConfigError("filtration needs at least one level");
  uint64_t p = eng.ring().p();
  uint32_t layers = 12;
  AdaptedBasis ab = adapted_basis(eng.curve(), p, eng.ring().eps(), layers);
  Filtration out;
  out.basis = ab.kind;
  out.e.assign(n_max, {0, 0, 0, 0, 0});
  LiftProbe probe{eng, ab};
  for (uint32_t j = 0; j < 5; ++j) {
    uint32_t k = 0;
    for (uint32_t n = 1; n <= n_max; ++n) {
      while (!probe.lifts_to(j, k, n)) {
        if (++k > 30) throw ConfigError("lifting degree failed to advance");
      }
      out.e[n - 1][j] = k;
    }
  }
  out.truncated = probe.truncated;
  return out;
}

QuadLattice scaled_lattice(const QuadLattice& model, const std::array<uint32_t, 5>& e, uint64_t p) {
  if (model.rank != 5) throw ConfigError("level scaling expects a rank-5 model");
  QuadLattice out(5);
  for (uint32_t i = 0; i < 5; ++i)
    for (uint32_t j = i; j < 5; ++j) {
      long long c = model.upper[i][j];
      if (c == 0) continue;
      uint32_t pw = e[i] + e[j];
      if (pw > 30) throw PrecisionExhausted("level scaling exponent too large");
      for (uint32_t t = 0; t < pw; ++t) c *= (long long)p;
      out.upper[i][j] = c;
    }
  return out;
}

LocalIntersection local_intersection(CurvePullback& eng, const QuadLattice& model, uint64_t m,
                                     uint32_t n_max) {
  if (m == 0) throw std::domain_error("local intersection needs m >= 1");
  Filtration f = sublattice_filtration(eng, n_max);
  uint64_t p = eng.ring().p();
  LocalIntersection out;
  for (uint32_t n = 1; n <= n_max; ++n) {
    QuadLattice sc = scaled_lattice(model, f.e[n - 1], p);
    uint64_t cnt = count_representations(sc, m);
    if (cnt == 0) {
      out.complete = true;
      break;
    }
    out.value += cnt;
    ++out.levels;
  }
  if (f.truncated) out.complete = false;
  return out;
}

double global_density(uint64_t A, uint64_t p, const QuadLattice& ambient, uint64_t m, double tol) {
  double q = eisenstein_coeff(ambient, m, tol);
  return (double)A / ((double)(p * p) - 1.0) * std::fabs(q);
}

IntersectionReport bound_report(CurvePullback& eng, const QuadLattice& model,
                                const QuadLattice& ambient, const std::vector<uint64_t>& ms,
                                uint32_t n_max, double tol) {
  TVal Atv = eng.contact_alpha01();
  if (Atv.at_least)
    throw ConfigError("bound report needs a finite first contact value; raise t precision");
  uint64_t p = eng.ring().p();
  Filtration f = sublattice_filtration(eng, n_max);

  uint64_t mmax = 0;
  for (uint64_t m : ms) mmax = std::max(mmax, m);
  std::map<std::array<uint32_t, 5>, std::vector<uint64_t>> hists;
  for (uint32_t n = 1; n <= n_max; ++n)
    if (!hists.count(f.e[n - 1]))
      hists[f.e[n - 1]] = representation_histogram(scaled_lattice(model, f.e[n - 1], p), mmax);

  IntersectionReport rep;
  rep.bound = (double)((p - 1) * (p - 1)) / (double)(p * p + 1);
  rep.A = (uint64_t)Atv.v;
  rep.n_max = n_max;
  rep.any_truncated = f.truncated;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  uint32_t npts = 0;
  for (uint64_t m : ms) {
    if (m == 0 || m > mmax) continue;
    BoundRow row;
    row.m = m;
    bool complete = false;
    for (uint32_t n = 1; n <= n_max; ++n) {
      uint64_t c = hists[f.e[n - 1]][m];
      if (c == 0) {
        complete = true;
        break;
      }
      row.lP += c;
    }
    row.complete = complete && !f.truncated;
    row.gP = (double)rep.A / ((double)(p * p) - 1.0) * std::fabs(eisenstein_coeff(ambient, m, tol));
    row.ratio = row.gP > 0 ? (double)row.lP / row.gP : 0.0;
    double slack = (double)row.lP - rep.bound * row.gP;
    if (slack > 0) {
      double lx = std::log((double)m), ly = std::log(slack);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++npts;
    }
    rep.rows.push_back(row);
  }
  if (npts >= 2 && npts * sxx - sx * sx > 1e-12) {
    rep.slack_exponent = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    rep.slack_fit_valid = true;
  }
  return rep;
}

RankOneBound rank_one_bound(CurvePullback& eng, long long q0, const std::vector<uint64_t>& ms,
                            uint32_t n_max) {
  if (q0 <= 0) throw ConfigError("rank-1 generator needs a positive square");
  uint64_t p = eng.ring().p();
  AdaptedBasis ab = adapted_basis(eng.curve(), p, eng.ring().eps(), 12);
  LiftProbe probe{eng, ab};
  std::vector<uint32_t> e5(n_max);
  uint32_t k = 0;
  for (uint32_t n = 1; n <= n_max; ++n) {
    while (!probe.lifts_to(4, k, n)) {
      if (++k > 30) throw ConfigError("lifting degree failed to advance");
    }
    e5[n - 1] = k;
  }
  RankOneBound out;
  out.complete = e5[n_max - 1] >= 1 && !probe.truncated;
  uint32_t free_levels = 0;
  for (uint32_t n = 0; n < n_max; ++n)
    if (e5[n] == 0) ++free_levels;
  out.NR = 2ull * free_levels;
  for (uint64_t m : ms) {
    uint64_t total = 0;
    for (uint32_t n = 0; n < n_max; ++n) {
      unsigned long long coeff = (unsigned long long)q0;
      for (uint32_t t = 0; t < 2 * e5[n]; ++t) coeff *= p;
      if (m % coeff == 0) {
        uint64_t s = m / coeff;
        uint64_t r = (uint64_t)std::llround(std::sqrt((double)s));
        for (uint64_t x = r > 1 ? r - 1 : 0; x <= r + 1; ++x)
          if (x * x == s && x > 0) total += 2;
      }
    }
    out.lR.push_back({m, total});
  }
  out.ok = true;
  for (auto& [m, v] : out.lR)
    if (v > out.NR) out.ok = false;
  return out;
}

}  // namespace crysect
