#include "crysect/admissible.hpp"

#include <algorithm>
#include <sstream>

namespace crysect {

uint32_t IndexSystem::min_index() const {
  if (lead) return *lead;
  if (!core_empty()) return core_min();
  return *trail;
}

uint32_t IndexSystem::max_index() const {
  if (trail) return *trail;
  if (!core_empty()) return core_max();
  return *lead;
}

uint32_t IndexSystem::core_min() const {
  uint32_t m = UINT32_MAX;
  if (!I.empty()) m = std::min(m, I.front());
  if (!J.empty()) m = std::min(m, J.front());
  return m;
}

uint32_t IndexSystem::core_max() const {
  uint32_t m = 0;
  if (!I.empty()) m = std::max(m, I.back());
  if (!J.empty()) m = std::max(m, J.back());
  return m;
}

static uint64_t pow_sat(uint64_t p, uint32_t k) {
  unsigned __int128 v = 1;
  for (uint32_t i = 0; i < k; ++i) {
    v *= p;
    if (v > UINT64_MAX) return UINT64_MAX;
  }
  return (uint64_t)v;
}

uint64_t IndexSystem::min_degree(uint64_t p) const {
  unsigned __int128 d = 0;
  for (uint32_t k : I) d += pow_sat(p, k);
  for (uint32_t k : J) d += 2 * (unsigned __int128)pow_sat(p, k);
  if (lead) d += pow_sat(p, *lead);
  if (trail) d += pow_sat(p, *trail);
  return d > UINT64_MAX ? UINT64_MAX : (uint64_t)d;
}

bool IndexSystem::operator<(const IndexSystem& o) const {
  auto key = [](const IndexSystem& s) {
    return std::make_tuple(s.lead.has_value(), s.lead.value_or(0), s.I, s.J,
                           s.trail.has_value(), s.trail.value_or(0));
  };
  return key(*this) < key(o);
}

std::string IndexSystem::str() const {
  std::ostringstream os;
  os << "(";
  if (lead) os << *lead << ";";
  os << "{";
  for (size_t i = 0; i < I.size(); ++i) os << (i ? "," : "") << I[i];
  os << "},{";
  for (size_t i = 0; i < J.size(); ++i) os << (i ? "," : "") << J[i];
  os << "}";
  if (trail) os << ";" << *trail;
  os << ")";
  return os.str();
}

static bool strictly_ascending(const std::vector<uint32_t>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] >= v[i]) return false;
  return true;
}

bool is_admissible(const IndexSystem& sys) {
  if (sys.I.size() % 2 != 0) return false;
  if (!strictly_ascending(sys.I) || !strictly_ascending(sys.J)) return false;

  // Merge the core, rejecting shared indices.
  struct El {
    uint32_t v;
    bool in_i;
  };
  std::vector<El> merged;
  merged.reserve(sys.I.size() + sys.J.size());
  {
    size_t a = 0, b = 0;
    while (a < sys.I.size() || b < sys.J.size()) {
      if (b == sys.J.size() || (a < sys.I.size() && sys.I[a] < sys.J[b]))
        merged.push_back({sys.I[a++], true});
      else if (a == sys.I.size() || sys.J[b] < sys.I[a])
        merged.push_back({sys.J[b++], false});
      else
        return false;
    }
  }

  // Maximal same-origin runs.
  struct Block {
    bool in_i;
    std::vector<uint32_t> v;
  };
  std::vector<Block> blocks;
  for (const El& e : merged) {
    if (blocks.empty() || blocks.back().in_i != e.in_i) blocks.push_back({e.in_i, {}});
    blocks.back().v.push_back(e.v);
  }

  for (const Block& blk : blocks) {
    const std::vector<uint32_t>& b = blk.v;
    if (blk.in_i) {
      if (b.size() % 2 != 0) return false;
      // Pair boundary inside the run: even 1-based position vs its successor.
      for (size_t q = 2; q < b.size(); q += 2)
        if (b[q - 1] % 2 == b[q] % 2) return false;
    } else {
      for (size_t q = 1; q < b.size(); ++q)
        if (b[q - 1] % 2 == b[q] % 2) return false;
    }
  }
  for (size_t k = 1; k < blocks.size(); ++k)
    if (blocks[k - 1].v.back() % 2 == blocks[k].v.front() % 2) return false;

  bool empty_core = merged.empty();
  if (sys.lead && !empty_core) {
    uint32_t mn = merged.front().v;
    if (*sys.lead >= mn || *sys.lead % 2 == mn % 2) return false;
  }
  if (sys.trail && !empty_core) {
    uint32_t mx = merged.back().v;
    if (*sys.trail <= mx || *sys.trail % 2 == mx % 2) return false;
  }
  if (sys.lead && sys.trail && empty_core) {
    if (*sys.lead >= *sys.trail || *sys.lead % 2 == *sys.trail % 2) return false;
  }
  return true;
}

std::vector<IndexSystem> enumerate_systems(uint32_t length, Star star, SystemKind kind,
                                           uint64_t p, uint64_t degree_cap) {
  std::vector<uint32_t> uni;
  for (uint32_t k = 0; k < 40; ++k) {
    if (pow_sat(p, k) >= degree_cap) break;
    uni.push_back(k);
  }
  if (uni.size() > 16) throw ConfigError("index universe too large for enumeration");

  bool want_lead = kind == SystemKind::LeadIJ || kind == SystemKind::LeadIJTrail;
  bool want_trail = kind == SystemKind::IJTrail || kind == SystemKind::LeadIJTrail;
  uint32_t core_len_target = length - (want_trail ? 1 : 0);
  if (want_trail && length == 0) return {};

  std::vector<IndexSystem> out;
  size_t U = uni.size();
  std::vector<uint8_t> lab(U, 0);

  auto emit = [&](IndexSystem&& sys) {
    if (!is_admissible(sys)) return;
    if (sys.length() != length) return;
    if (sys.min_degree(p) >= degree_cap) return;
    if (!sys.star_matches(star)) return;
    out.push_back(std::move(sys));
  };

  while (true) {
    IndexSystem base;
    for (size_t i = 0; i < U; ++i) {
      if (lab[i] == 1) base.I.push_back(uni[i]);
      else if (lab[i] == 2) base.J.push_back(uni[i]);
    }
    if (base.I.size() % 2 == 0 &&
        base.J.size() + base.I.size() / 2 == core_len_target) {
      if (!want_lead && !want_trail) {
        emit(IndexSystem(base));
      } else if (want_lead && !want_trail) {
        for (uint32_t ld : uni) {
          IndexSystem s(base);
          s.lead = ld;
          emit(std::move(s));
        }
      } else if (!want_lead && want_trail) {
        for (uint32_t tr : uni) {
          IndexSystem s(base);
          s.trail = tr;
          emit(std::move(s));
        }
      } else {
        for (uint32_t ld : uni)
          for (uint32_t tr : uni) {
            IndexSystem s(base);
            s.lead = ld;
            s.trail = tr;
            emit(std::move(s));
          }
      }
    }
    size_t i = 0;
    for (; i < U; ++i) {
      if (++lab[i] < 3) break;
      lab[i] = 0;
    }
    if (i == U) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

TruncatedSeries alpha_prod(const std::vector<uint32_t>& I, const CrystalData& cd) {
  TruncatedSeries acc = TruncatedSeries::constant(cd.ring(), cd.deg_bound(),
                                                 WittScalar::from_int(cd.ring(), 1));
  for (size_t t = 0; t + 1 < I.size(); t += 2) acc = acc * cd.alpha(I[t], I[t + 1]);
  return acc;
}

TruncatedSeries beta_prod(const std::vector<uint32_t>& J, const CrystalData& cd) {
  TruncatedSeries acc = TruncatedSeries::constant(cd.ring(), cd.deg_bound(),
                                                 WittScalar::from_int(cd.ring(), 1));
  for (uint32_t j : J) acc = acc * cd.beta(j);
  return acc;
}

SeriesMat a_product(const IndexSystem& sys, const CrystalData& cd) {
  std::vector<SeriesMat> factors;
  if (sys.lead) factors.push_back(cd.b_block(*sys.lead));

  // Core factors in merged order: an I-run alternates C then B, a J-run is
  // one E per element.
  size_t a = 0, b = 0;
  bool next_i_is_c = true;
  while (a < sys.I.size() || b < sys.J.size()) {
    bool take_i = b == sys.J.size() || (a < sys.I.size() && sys.I[a] < sys.J[b]);
    if (take_i) {
      factors.push_back(next_i_is_c ? cd.c_block(sys.I[a]) : cd.b_block(sys.I[a]));
      next_i_is_c = !next_i_is_c;
      ++a;
    } else {
      factors.push_back(cd.e_block(sys.J[b]));
      ++b;
    }
  }
  if (sys.trail) factors.push_back(cd.c_block(*sys.trail));

  if (factors.empty()) return SeriesMat::identity(cd.ring(), cd.deg_bound(), 2);
  SeriesMat acc = factors[0];
  for (size_t k = 1; k < factors.size(); ++k) acc = acc * factors[k];
  return acc;
}

SeriesMat closed_form_a(const std::vector<uint32_t>& I, const std::vector<uint32_t>& J,
                        const CrystalData& cd) {
  if (I.empty() && J.empty()) throw ConfigError("closed form needs a nonempty core");
  uint32_t len = (uint32_t)J.size() + (uint32_t)I.size() / 2;
  uint32_t mn = UINT32_MAX, mx = 0;
  for (uint32_t k : I) mn = std::min(mn, k), mx = std::max(mx, k);
  for (uint32_t k : J) mn = std::min(mn, k), mx = std::max(mx, k);

  TruncatedSeries prod = alpha_prod(I, cd) * beta_prod(J, cd);
  WittScalar scale = WittScalar::from_int(cd.ring(), -2).pow(len - 1);
  prod = prod.scaled(scale);

  SeriesMat d = cd.d_matrix(mn, mx);
  SeriesMat out(cd.ring(), cd.deg_bound(), 2, 2);
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 2; ++j) out.at(i, j) = d.at(i, j) * prod;
  return out;
}

SeriesMat f_block(uint32_t n, Star star, const CrystalData& cd) {
  if (n == 0) throw ConfigError("graded block requires n >= 1");
  const WittRing& r = cd.ring();
  uint64_t p = r.p();
  SeriesMat out(r, cd.deg_bound(), 5, 5);

  auto add_corner = [&](SystemKind kind, uint32_t r0, uint32_t c0) {
    for (const IndexSystem& sys : enumerate_systems(n, star, kind, p, cd.deg_bound())) {
      SeriesMat a = a_product(sys, cd);
      for (uint32_t i = 0; i < a.rows(); ++i)
        for (uint32_t j = 0; j < a.cols(); ++j)
          out.at(r0 + i, c0 + j) = out.at(r0 + i, c0 + j) + a.at(i, j);
    }
  };
  add_corner(SystemKind::IJ, 0, 0);
  add_corner(SystemKind::IJTrail, 0, 2);
  add_corner(SystemKind::LeadIJ, 2, 0);
  add_corner(SystemKind::LeadIJTrail, 2, 2);

  WittScalar inv2n = WittScalar::from_int(r, 2).inverse().pow(n);
  return out.scaled(inv2n);
}

SeriesMat f_zero_block(const CrystalData& cd) {
  const WittRing& r = cd.ring();
  SeriesMat out = SeriesMat::identity(r, cd.deg_bound(), 5);
  for (const IndexSystem& sys :
       enumerate_systems(0, Star::Void, SystemKind::LeadIJ, r.p(), cd.deg_bound())) {
    SeriesMat b = cd.b_block(*sys.lead);
    for (uint32_t i = 0; i < 3; ++i)
      for (uint32_t j = 0; j < 2; ++j)
        out.at(2 + i, j) = out.at(2 + i, j) + b.at(i, j);
  }
  return out;
}

std::array<TruncatedSeries, 5> g_series(uint32_t n, Star star, const SpecialEndo& w,
                                        const CrystalData& cd) {
  if (n == 0) throw ConfigError("graded image requires n >= 1");
  const WittRing& r = cd.ring();
  std::array<TruncatedSeries, 5> out{
      TruncatedSeries::zero(r, cd.deg_bound()), TruncatedSeries::zero(r, cd.deg_bound()),
      TruncatedSeries::zero(r, cd.deg_bound()), TruncatedSeries::zero(r, cd.deg_bound()),
      TruncatedSeries::zero(r, cd.deg_bound())};

  std::vector<std::array<uint64_t, 5>> digits = cd.digit_table(w);
  for (uint32_t k = 0; k < digits.size(); ++k) {
    bool any = false;
    for (int j = 0; j < 5; ++j) any = any || digits[k][j] != 0;
    if (!any) continue;
    SeriesMat fb = f_block(n + k, star, cd);
    for (int j = 0; j < 5; ++j) {
      if (digits[k][j] == 0) continue;
      WittScalar d(r, digits[k][j], 0);
      for (int i = 0; i < 5; ++i) out[i] = out[i] + fb.at(i, j).scaled(d);
    }
  }
  return out;
}

std::array<TruncatedSeries, 5> g_series_recursive(uint32_t n, Star star, const SpecialEndo& w,
                                                  uint32_t m, const CrystalData& cd) {
  if (m == 0 || m > n) throw ConfigError("reduction level must satisfy 1 <= m <= n");
  const WittRing& r = cd.ring();
  uint64_t p = r.p();
  uint32_t D = cd.deg_bound();

  TruncatedSeries g1 = g_series(m, Star::Even, w, cd)[0];
  WittScalar lam = cd.lambda();
  WittScalar one = WittScalar::from_int(r, 1);
  auto sgn = [&](uint32_t e) { return e % 2 == 0 ? one : -one; };

  std::array<TruncatedSeries, 5> out{
      TruncatedSeries::zero(r, D), TruncatedSeries::zero(r, D), TruncatedSeries::zero(r, D),
      TruncatedSeries::zero(r, D), TruncatedSeries::zero(r, D)};

  if (n == m) {
    TruncatedSeries g1t = g1.sigma();
    if (star == Star::Void) {
      out[0] = g1 + g1t;
      out[1] = g1.scaled(lam) - g1t.scaled(lam);
    } else if (star == Star::Even) {
      out[0] = g1;
      out[1] = g1.scaled(lam);
    } else {
      out[0] = g1t;
      out[1] = -g1t.scaled(lam);
    }
  } else {
    for (const IndexSystem& sys : enumerate_systems(n - m, star, SystemKind::IJ, p, D)) {
      uint32_t mx = sys.core_max(), mn = sys.core_min();
      TruncatedSeries t = alpha_prod(sys.I, cd) * beta_prod(sys.J, cd) * g1.sigma_pow(mx + 1);
      WittScalar s1 = sgn(n - m) * sgn(mx + 1);
      out[0] = out[0] + t.scaled(s1 * sgn(mn));
      out[1] = out[1] + t.scaled(s1 * lam);
    }
  }

  for (const IndexSystem& sys : enumerate_systems(n - m, star, SystemKind::LeadIJ, p, D)) {
    uint32_t big = sys.core_empty() ? *sys.lead : sys.core_max();
    TruncatedSeries base =
        alpha_prod(sys.I, cd) * beta_prod(sys.J, cd) * g1.sigma_pow(big + 1);
    WittScalar pre = WittScalar::from_int(r, 2) * lam * sgn(n - m + 1) * sgn(big + 1);
    out[2] = out[2] + (cd.var_twist(1, *sys.lead) * base).scaled(pre);
    out[3] = out[3] + (cd.var_twist(0, *sys.lead) * base).scaled(pre);
    out[4] = out[4] + (cd.var_twist(2, *sys.lead) * base).scaled(pre * cd.inv_2eps());
  }
  return out;
}

}  // namespace crysect
