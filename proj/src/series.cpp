#include "crysect/series.hpp"

#include <algorithm>

namespace crysect {

TruncatedSeries TruncatedSeries::constant(const WittRing& r, uint32_t deg_bound,
                                          const WittScalar& c) {
  TruncatedSeries s(r, deg_bound);
  s.set_term(Expo{0, 0, 0}, c);
  return s;
}

TruncatedSeries TruncatedSeries::variable(const WittRing& r, uint32_t deg_bound, int which) {
  TruncatedSeries s(r, deg_bound);
  Expo e;
  if (which == 0)
    e.x = 1;
  else if (which == 1)
    e.y = 1;
  else
    e.z = 1;
  s.set_term(e, WittScalar::from_int(r, 1));
  return s;
}

void TruncatedSeries::set_term(const Expo& e, const WittScalar& v) {
  if (e.total() >= deg_) throw DegreeBoundError("monomial exceeds the degree bound");
  WittScalar w = v.truncate(n_eff_);
  if (w.is_zero())
    c_.erase(e.key());
  else
    c_.insert_or_assign(e.key(), w);
}

std::optional<WittScalar> TruncatedSeries::coeff(const Expo& e) const {
  auto it = c_.find(e.key());
  if (it == c_.end()) return std::nullopt;
  return it->second;
}

void TruncatedSeries::reduce_mod_neff() {
  for (auto it = c_.begin(); it != c_.end();) {
    WittScalar w = it->second.truncate(n_eff_);
    if (w.is_zero())
      it = c_.erase(it);
    else {
      it->second = w;
      ++it;
    }
  }
}

void TruncatedSeries::normalize() {
  reduce_mod_neff();
  if (c_.empty()) {
    pdenom_ = 0;
    return;
  }
  // Keep the denominator minimal: strip p from every coefficient while the
  // denominator is nonzero and no coefficient is a unit.  Each strip costs
  // one digit of effective precision, failing loudly when none remain.
  while (pdenom_ > 0) {
    bool all_div = true;
    for (auto& kv : c_)
      if (kv.second.p_valuation() == 0) {
        all_div = false;
        break;
      }
    if (!all_div) break;
    if (n_eff_ <= 1)
      throw PrecisionExhausted("effective p-precision exhausted during pdenom reduction");
    for (auto& kv : c_) kv.second = kv.second.divexact_p();
    --pdenom_;
    --n_eff_;
    reduce_mod_neff();
    if (c_.empty()) {
      pdenom_ = 0;
      return;
    }
  }
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  uint32_t k = std::max(pdenom_, o.pdenom_);
  const uint32_t N = r_->n();
  auto lift = [&](const TruncatedSeries& s) {
    TruncatedSeries t = s;
    uint32_t up = k - s.pdenom_;
    if (up > 0) {
      for (auto& kv : t.c_) kv.second = kv.second.mul_p_pow(up);
      t.n_eff_ = std::min<uint32_t>(N, s.n_eff_ + up);
      t.pdenom_ = k;
    }
    return t;
  };
  TruncatedSeries a = lift(*this), b = lift(o);
  TruncatedSeries out(*r_, std::min(deg_, o.deg_));
  out.pdenom_ = k;
  out.n_eff_ = std::min(a.n_eff_, b.n_eff_);
  out.trunc_loss_ = trunc_loss_ || o.trunc_loss_;
  out.c_ = a.c_;
  for (auto& kv : b.c_) {
    auto it = out.c_.find(kv.first);
    if (it == out.c_.end())
      out.c_.insert(kv);
    else
      it->second = it->second + kv.second;
  }
  out.normalize();
  return out;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries out = *this;
  for (auto& kv : out.c_) kv.second = -kv.second;
  return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  return *this + (-o);
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  TruncatedSeries out(*r_, std::min(deg_, o.deg_));
  out.pdenom_ = pdenom_ + o.pdenom_;
  out.n_eff_ = std::min(n_eff_, o.n_eff_);
  out.trunc_loss_ = trunc_loss_ || o.trunc_loss_;
  for (auto& ka : c_) {
    Expo ea = Expo::from_key(ka.first);
    for (auto& kb : o.c_) {
      Expo eb = Expo::from_key(kb.first);
      Expo e{ea.x + eb.x, ea.y + eb.y, ea.z + eb.z};
      if (e.total() >= out.deg_) continue;
      WittScalar prod = ka.second * kb.second;
      auto it = out.c_.find(e.key());
      if (it == out.c_.end())
        out.c_.emplace(e.key(), prod);
      else
        it->second = it->second + prod;
    }
  }
  out.normalize();
  return out;
}

TruncatedSeries TruncatedSeries::scaled(const WittScalar& s) const {
  TruncatedSeries out = *this;
  for (auto& kv : out.c_) kv.second = kv.second * s;
  out.normalize();
  return out;
}

TruncatedSeries TruncatedSeries::p_shift_down(uint32_t k) const {
  TruncatedSeries out = *this;
  out.pdenom_ += k;
  out.normalize();
  return out;
}

TruncatedSeries TruncatedSeries::p_shift_up(uint32_t k) const {
  TruncatedSeries out = *this;
  uint32_t cancel = std::min(k, out.pdenom_);
  out.pdenom_ -= cancel;
  k -= cancel;
  if (k > 0) {
    for (auto& kv : out.c_) kv.second = kv.second.mul_p_pow(k);
    out.n_eff_ = std::min<uint32_t>(r_->n(), out.n_eff_ + k);
  }
  out.normalize();
  return out;
}

TruncatedSeries TruncatedSeries::sigma() const {
  TruncatedSeries out(*r_, deg_);
  out.pdenom_ = pdenom_;
  out.n_eff_ = n_eff_;
  out.trunc_loss_ = trunc_loss_;
  for (auto& kv : c_) {
    Expo e = Expo::from_key(kv.first);
    Expo pe{e.x * (uint32_t)r_->p(), e.y * (uint32_t)r_->p(), e.z * (uint32_t)r_->p()};
    if (pe.total() >= deg_) {
      out.trunc_loss_ = true;
      continue;
    }
    out.c_.emplace(pe.key(), kv.second.frobenius());
  }
  out.normalize();
  return out;
}

TruncatedSeries TruncatedSeries::sigma_pow(uint32_t k) const {
  TruncatedSeries out = *this;
  for (uint32_t i = 0; i < k; ++i) out = out.sigma();
  return out;
}

TruncatedSeries TruncatedSeries::reduced_mod_p() const {
  if (pdenom_ != 0) throw std::domain_error("mod-p reduction of a non-integral series");
  if (n_eff_ < 1) throw PrecisionExhausted("no precision left for mod-p reduction");
  TruncatedSeries out = *this;
  out.n_eff_ = 1;
  out.reduce_mod_neff();
  return out;
}

bool TruncatedSeries::equals(const TruncatedSeries& o) const {
  uint32_t k = std::max(pdenom_, o.pdenom_);
  const uint32_t N = r_->n();
  auto lift = [&](const TruncatedSeries& s) {
    TruncatedSeries t = s;
    uint32_t up = k - s.pdenom_;
    if (up > 0) {
      for (auto& kv : t.c_) kv.second = kv.second.mul_p_pow(up);
      t.n_eff_ = std::min<uint32_t>(N, s.n_eff_ + up);
    }
    return t;
  };
  TruncatedSeries a = lift(*this), b = lift(o);
  uint32_t ne = std::min(a.n_eff_, b.n_eff_);
  a.n_eff_ = b.n_eff_ = ne;
  a.reduce_mod_neff();
  b.reduce_mod_neff();
  return a.c_.size() == b.c_.size() &&
         std::equal(a.c_.begin(), a.c_.end(), b.c_.begin(),
                    [](const auto& x, const auto& y) {
                      return x.first == y.first && x.second == y.second;
                    });
}

std::vector<Expo> TruncatedSeries::support() const {
  std::vector<Expo> out;
  out.reserve(c_.size());
  for (auto& kv : c_) out.push_back(Expo::from_key(kv.first));
  return out;
}

// ---------------------------------------------------------------------------

UniSeries UniSeries::operator+(const UniSeries& o) const {
  UniSeries out(*r_, std::min(tprec(), o.tprec()));
  uint32_t k = std::max(pdenom_, o.pdenom_);
  const uint32_t N = r_->n();
  auto liftc = [&](const UniSeries& s, size_t i) {
    return s.c_[i].mul_p_pow(k - s.pdenom_);
  };
  out.pdenom_ = k;
  uint32_t na = std::min<uint32_t>(N, n_eff_ + (k - pdenom_));
  uint32_t nb = std::min<uint32_t>(N, o.n_eff_ + (k - o.pdenom_));
  out.n_eff_ = std::min(na, nb);
  for (size_t i = 0; i < out.c_.size(); ++i)
    out.c_[i] = (liftc(*this, i) + liftc(o, i)).truncate(out.n_eff_);
  out.valid_ = std::min({valid_, o.valid_, out.tprec()});
  return out;
}

UniSeries UniSeries::operator-(const UniSeries& o) const {
  UniSeries t = o;
  for (auto& v : t.c_) v = -v;
  return *this + t;
}

uint32_t UniSeries::low_index() const {
  for (uint32_t i = 0; i < c_.size(); ++i)
    if (!c_[i].is_zero()) return i;
  return valid_;
}

UniSeries UniSeries::operator*(const UniSeries& o) const {
  uint32_t T = std::min(tprec(), o.tprec());
  UniSeries out(*r_, T);
  out.pdenom_ = pdenom_ + o.pdenom_;
  out.n_eff_ = std::min(n_eff_, o.n_eff_);
  uint32_t la = low_index(), lb = o.low_index();
  out.valid_ = std::min<uint64_t>({(uint64_t)valid_ + lb, (uint64_t)o.valid_ + la, (uint64_t)T});
  for (uint32_t i = la; i < c_.size() && i < T; ++i) {
    if (c_[i].is_zero()) continue;
    for (uint32_t j = lb; j < o.c_.size() && i + j < T; ++j) {
      if (o.c_[j].is_zero()) continue;
      out.c_[i + j] = out.c_[i + j] + c_[i] * o.c_[j];
    }
  }
  for (auto& v : out.c_) v = v.truncate(out.n_eff_);
  return out;
}

UniSeries UniSeries::scaled(const WittScalar& s) const {
  UniSeries out = *this;
  for (auto& v : out.c_) v = (v * s).truncate(n_eff_);
  return out;
}

UniSeries UniSeries::pow(uint64_t e) const {
  UniSeries acc(*r_, tprec());
  acc.set(0, WittScalar::from_int(*r_, 1));
  acc.n_eff_ = n_eff_;
  UniSeries base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

UniSeries UniSeries::frobenius_map() const {
  if (pdenom_ != 0 || n_eff_ != 1)
    throw std::domain_error("frobenius_map requires a mod-p series");
  uint64_t p = r_->p();
  UniSeries out(*r_, tprec());
  out.n_eff_ = 1;
  out.valid_ = (uint32_t)std::min<uint64_t>((uint64_t)valid_ * p, tprec());
  for (uint32_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    uint64_t j = (uint64_t)i * p;
    if (j >= tprec()) break;
    out.c_[j] = c_[i].pow(p).truncate(1);
  }
  return out;
}

UniSeries UniSeries::reduced_mod_p() const {
  if (pdenom_ != 0) throw std::domain_error("mod-p reduction of a non-integral series");
  UniSeries out = *this;
  out.n_eff_ = 1;
  for (auto& v : out.c_) v = v.truncate(1);
  return out;
}

TVal UniSeries::t_valuation() const {
  if (pdenom_ != 0) throw std::domain_error("t_valuation requires an integral series");
  uint64_t p = r_->p();
  for (uint32_t i = 0; i < valid_; ++i)
    if (c_[i].a() % p != 0 || c_[i].b() % p != 0) return TVal::exact(i);
  return TVal::lower_bound(valid_);
}

bool UniSeries::equals_mod_p(const UniSeries& o) const {
  uint32_t lim = std::min(valid_, o.valid_);
  uint64_t p = r_->p();
  for (uint32_t i = 0; i < lim; ++i)
    if (c_[i].a() % p != o.c_[i].a() % p || c_[i].b() % p != o.c_[i].b() % p) return false;
  return true;
}

UniSeries substitute_curve(const TruncatedSeries& s, const UniSeries& X, const UniSeries& Y,
                           const UniSeries& Z) {
  if (s.pdenom() != 0)
    throw std::domain_error("substitute_curve requires an integral series");
  const WittRing& r = X.ring();
  uint32_t T = std::min({X.tprec(), Y.tprec(), Z.tprec()});
  UniSeries out(r, T);
  uint32_t ne = std::min(
      {s.n_eff(), X.n_eff(), Y.n_eff(), Z.n_eff()});
  out.set_n_eff(ne);

  uint32_t lowmin = std::min({X.low_index(), Y.low_index(), Z.low_index()});
  uint64_t lost_from = (uint64_t)s.deg_bound() * lowmin;
  uint32_t valid = (uint32_t)std::min<uint64_t>(
      {(uint64_t)T, lost_from, (uint64_t)X.valid_to(), (uint64_t)Y.valid_to(),
       (uint64_t)Z.valid_to()});

  std::map<uint32_t, UniSeries> px, py, pz;
  auto power = [&](std::map<uint32_t, UniSeries>& cache, const UniSeries& base,
                   uint32_t e) -> const UniSeries& {
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    return cache.emplace(e, base.pow(e)).first->second;
  };

  for (auto& ex : s.support()) {
    WittScalar cv = *s.coeff(ex);
    UniSeries term(r, T);
    term.set(0, cv);
    term.set_n_eff(ne);
    if (ex.x) term = term * power(px, X, ex.x);
    if (ex.y) term = term * power(py, Y, ex.y);
    if (ex.z) term = term * power(pz, Z, ex.z);
    out = out + term;
  }
  out.clamp_valid(valid);
  return out;
}

// ---------------------------------------------------------------------------

SeriesMat SeriesMat::identity(const WittRing& r, uint32_t deg_bound, uint32_t n) {
  SeriesMat m(r, deg_bound, n, n);
  for (uint32_t i = 0; i < n; ++i)
    m.at(i, i) = TruncatedSeries::constant(r, deg_bound, WittScalar::from_int(r, 1));
  return m;
}

SeriesMat SeriesMat::operator+(const SeriesMat& o) const {
  SeriesMat out = *this;
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] + o.e_[i];
  return out;
}

SeriesMat SeriesMat::operator-(const SeriesMat& o) const {
  SeriesMat out = *this;
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] - o.e_[i];
  return out;
}

SeriesMat SeriesMat::operator*(const SeriesMat& o) const {
  const WittRing& r = e_[0].ring();
  uint32_t D = e_[0].deg_bound();
  SeriesMat out(r, D, rows_, o.cols_);
  for (uint32_t i = 0; i < rows_; ++i)
    for (uint32_t j = 0; j < o.cols_; ++j) {
      TruncatedSeries acc = TruncatedSeries::zero(r, D);
      for (uint32_t k = 0; k < cols_; ++k) acc = acc + at(i, k) * o.at(k, j);
      out.at(i, j) = acc;
    }
  return out;
}

SeriesMat SeriesMat::scaled(const WittScalar& s) const {
  SeriesMat out = *this;
  for (auto& t : out.e_) t = t.scaled(s);
  return out;
}

SeriesMat SeriesMat::p_shift_down(uint32_t k) const {
  SeriesMat out = *this;
  for (auto& t : out.e_) t = t.p_shift_down(k);
  return out;
}

SeriesMat SeriesMat::sigma() const {
  SeriesMat out = *this;
  for (auto& t : out.e_) t = t.sigma();
  return out;
}

SeriesMat SeriesMat::sigma_pow(uint32_t k) const {
  SeriesMat out = *this;
  for (auto& t : out.e_) t = t.sigma_pow(k);
  return out;
}

bool SeriesMat::equals(const SeriesMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (size_t i = 0; i < e_.size(); ++i)
    if (!e_[i].equals(o.e_[i])) return false;
  return true;
}

}  // namespace crysect
