#include "crysect/crystal.hpp"

namespace crysect {

CrystalData::CrystalData(const WittRing& r, uint32_t deg_bound) : r_(&r), deg_(deg_bound) {
  if (deg_bound < 3) throw ConfigError("degree bound too small for the crystal data");
}

WittScalar CrystalData::inv_lambda() const { return lambda().inverse(); }

WittScalar CrystalData::inv_2eps() const {
  return (WittScalar::from_int(*r_, 2) * eps_hat()).inverse();
}

WittScalar CrystalData::inv_4eps() const {
  return (WittScalar::from_int(*r_, 4) * eps_hat()).inverse();
}

WittScalar CrystalData::half() const { return WittScalar::from_int(*r_, 2).inverse(); }

static uint64_t pow_u64(uint64_t b, uint32_t e) {
  uint64_t v = 1;
  while (e--) v *= b;
  return v;
}

TruncatedSeries CrystalData::var_twist(int which, uint32_t i) const {
  uint64_t pe = pow_u64(r_->p(), i);
  if (pe >= deg_) throw DegreeBoundError("twisted variable exceeds the degree bound");
  TruncatedSeries s(*r_, deg_);
  Expo e;
  if (which == 0)
    e.x = (uint32_t)pe;
  else if (which == 1)
    e.y = (uint32_t)pe;
  else
    e.z = (uint32_t)pe;
  s.set_term(e, WittScalar::from_int(*r_, 1));
  return s;
}

TruncatedSeries CrystalData::alpha(uint32_t i, uint32_t j) const {
  uint64_t pi = pow_u64(r_->p(), i), pj = pow_u64(r_->p(), j);
  if (pi + pj >= deg_) throw DegreeBoundError("alpha(i,j) exceeds the degree bound");
  TruncatedSeries s(*r_, deg_);
  WittScalar one = WittScalar::from_int(*r_, 1);
  s.set_term(Expo{(uint32_t)pi, (uint32_t)pj, 0}, one);
  if (i != j) {
    s.set_term(Expo{(uint32_t)pj, (uint32_t)pi, 0}, one);
  } else {
    s.set_term(Expo{(uint32_t)pi, (uint32_t)pj, 0}, WittScalar::from_int(*r_, 2));
  }
  s.set_term(Expo{0, 0, (uint32_t)(pi + pj)}, inv_2eps());
  return s;
}

TruncatedSeries CrystalData::beta(uint32_t i) const {
  uint64_t pi = pow_u64(r_->p(), i);
  if (2 * pi >= deg_) throw DegreeBoundError("beta(i) exceeds the degree bound");
  TruncatedSeries s(*r_, deg_);
  s.set_term(Expo{(uint32_t)pi, (uint32_t)pi, 0}, WittScalar::from_int(*r_, 1));
  s.set_term(Expo{0, 0, (uint32_t)(2 * pi)}, inv_4eps());
  return s;
}

SeriesMat CrystalData::d_matrix(uint32_t i, uint32_t j) const {
  SeriesMat m(*r_, deg_, 2, 2);
  WittScalar one = WittScalar::from_int(*r_, 1);
  auto sgn = [&](uint32_t k) { return (k % 2 == 0) ? one : -one; };
  m.at(0, 0) = TruncatedSeries::constant(*r_, deg_, sgn(i + j));
  m.at(0, 1) = TruncatedSeries::constant(*r_, deg_, sgn(i + 1) * inv_lambda());
  m.at(1, 0) = TruncatedSeries::constant(*r_, deg_, sgn(j) * lambda());
  m.at(1, 1) = TruncatedSeries::constant(*r_, deg_, -one);
  return m;
}

SeriesMat CrystalData::b_block(uint32_t i) const {
  // sigma^i of [[L y, -y], [L x, -x], [L z/2eps, -z/2eps]]
  SeriesMat m(*r_, deg_, 3, 2);
  WittScalar L = (i % 2 == 0) ? lambda() : -lambda();
  WittScalar one = WittScalar::from_int(*r_, 1);
  TruncatedSeries xs = var_twist(0, i), ys = var_twist(1, i), zs = var_twist(2, i);
  m.at(0, 0) = ys.scaled(L);
  m.at(0, 1) = ys.scaled(-one);
  m.at(1, 0) = xs.scaled(L);
  m.at(1, 1) = xs.scaled(-one);
  m.at(2, 0) = zs.scaled(L * inv_2eps());
  m.at(2, 1) = zs.scaled(-inv_2eps());
  return m;
}

SeriesMat CrystalData::c_block(uint32_t i) const {
  // sigma^i of [[x/L, y/L, z/L], [x, y, z]]
  SeriesMat m(*r_, deg_, 2, 3);
  WittScalar iL = (i % 2 == 0) ? inv_lambda() : -inv_lambda();
  TruncatedSeries xs = var_twist(0, i), ys = var_twist(1, i), zs = var_twist(2, i);
  m.at(0, 0) = xs.scaled(iL);
  m.at(0, 1) = ys.scaled(iL);
  m.at(0, 2) = zs.scaled(iL);
  m.at(1, 0) = xs;
  m.at(1, 1) = ys;
  m.at(1, 2) = zs;
  return m;
}

SeriesMat CrystalData::e_block(uint32_t i) const {
  SeriesMat d = d_matrix(i, i);
  TruncatedSeries bi = beta(i);
  SeriesMat m(*r_, deg_, 2, 2);
  for (uint32_t r = 0; r < 2; ++r)
    for (uint32_t c = 0; c < 2; ++c) m.at(r, c) = d.at(r, c) * bi;
  return m;
}

SeriesMat CrystalData::frob_matrix() const {
  SeriesMat m(*r_, deg_, 5, 5);
  SeriesMat E = e_block(0), C = c_block(0), B = b_block(0);
  WittScalar h = half();
  for (uint32_t r = 0; r < 2; ++r) {
    for (uint32_t c = 0; c < 2; ++c) m.at(r, c) = E.at(r, c).scaled(h).p_shift_down(1);
    for (uint32_t c = 0; c < 3; ++c) m.at(r, 2 + c) = C.at(r, c).scaled(h).p_shift_down(1);
  }
  for (uint32_t r = 0; r < 3; ++r)
    for (uint32_t c = 0; c < 2; ++c) m.at(2 + r, c) = B.at(r, c);
  return m;
}

SeriesMat CrystalData::u_matrix() const {
  SeriesMat m = SeriesMat::identity(*r_, deg_, 5);
  TruncatedSeries xs = var(0), ys = var(1), zs = var(2);
  TruncatedSeries b0 = beta(0);
  WittScalar one = WittScalar::from_int(*r_, 1);
  m.at(0, 1) = xs;
  m.at(0, 2) = -b0;
  m.at(0, 3) = ys;
  m.at(0, 4) = zs;
  m.at(1, 2) = ys.scaled(-one);
  m.at(3, 2) = xs.scaled(-one);
  m.at(4, 2) = zs.scaled(-inv_2eps());
  return m;
}

SeriesMat CrystalData::frob_v_matrix() const {
  SeriesMat m(*r_, deg_, 5, 5);
  TruncatedSeries xs = var(0), ys = var(1), zs = var(2);
  TruncatedSeries b0 = beta(0);
  WittScalar one = WittScalar::from_int(*r_, 1);
  WittScalar p1 = WittScalar::from_int(*r_, (long long)r_->p());
  WittScalar p2 = p1 * p1;
  m.at(0, 0) = -b0;
  m.at(0, 1) = xs.scaled(p1);
  m.at(0, 2) = TruncatedSeries::constant(*r_, deg_, p2);
  m.at(0, 3) = ys.scaled(p1);
  m.at(0, 4) = zs.scaled(p1);
  m.at(1, 0) = ys.scaled(-one);
  m.at(1, 1) = TruncatedSeries::constant(*r_, deg_, p1);
  m.at(2, 0) = TruncatedSeries::constant(*r_, deg_, one);
  m.at(3, 0) = xs.scaled(-one);
  m.at(3, 3) = TruncatedSeries::constant(*r_, deg_, p1);
  m.at(4, 0) = zs.scaled(-inv_2eps());
  m.at(4, 4) = TruncatedSeries::constant(*r_, deg_, p1);
  return m;
}

uint32_t CrystalData::auto_depth() const {
  uint32_t d = 0;
  uint64_t v = 1;
  while (v < deg_) {
    v *= r_->p();
    ++d;
  }
  return d + 1;
}

SeriesMat CrystalData::f_infty(uint32_t depth) const {
  if (depth == 0) depth = auto_depth();
  SeriesMat acc = SeriesMat::identity(*r_, deg_, 5);
  SeriesMat F = frob_matrix();
  for (uint32_t i = 0; i < depth; ++i) {
    SeriesMat factor = SeriesMat::identity(*r_, deg_, 5) + F.sigma_pow(i);
    acc = acc * factor;
  }
  return acc;
}

std::array<std::array<long long, 5>, 5> CrystalData::q_prime_upper() const {
  std::array<std::array<long long, 5>, 5> q{};
  long long p = (long long)r_->p(), e = (long long)r_->eps();
  q[0][0] = -p * e;
  q[1][1] = p;
  q[2][3] = 1;
  q[4][4] = e;
  return q;
}

WittScalar CrystalData::q_prime_eval(const SpecialEndo& w) const {
  WittScalar p1 = WittScalar::from_int(*r_, (long long)r_->p());
  WittScalar eps = eps_hat();
  auto C = [&](int i) { return WittScalar(*r_, w.coord[i] % r_->modulus(), 0); };
  WittScalar out = -(p1 * eps * C(0) * C(0)) + p1 * C(1) * C(1) + C(2) * C(3) +
                   eps * C(4) * C(4);
  return out;
}

std::vector<std::array<uint64_t, 5>> CrystalData::digit_table(const SpecialEndo& w) const {
  std::vector<std::array<uint64_t, 5>> out(r_->n());
  for (int j = 0; j < 5; ++j) {
    auto d = teichmuller_digits(*r_, w.coord[j]);
    for (uint32_t k = 0; k < r_->n(); ++k) out[k][j] = d[k];
  }
  return out;
}

}  // namespace crysect
