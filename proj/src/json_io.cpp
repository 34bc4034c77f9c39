#include "crysect/json_io.hpp"

#include <fstream>

namespace crysect {

namespace {

json digits_json(const WittRing& r, uint64_t v) {
  std::vector<uint32_t> d = r.base_digits(v);
  while (!d.empty() && d.back() == 0) d.pop_back();
  return json(d);
}

uint64_t digits_value(const WittRing& r, const json& arr, const char* what) {
  if (!arr.is_array()) throw ConfigError(std::string(what) + ": digit list expected");
  std::vector<uint32_t> d;
  for (const json& e : arr) {
    if (!e.is_number_unsigned() || e.get<uint64_t>() >= r.p())
      throw ConfigError(std::string(what) + ": digits must lie in [0, p)");
    d.push_back(e.get<uint32_t>());
  }
  d.resize(r.n(), 0);
  return r.from_base_digits(d);
}

}  // namespace

json scalar_to_json(const WittScalar& s) {
  json j;
  j["a"] = digits_json(s.ring(), s.a());
  j["b"] = digits_json(s.ring(), s.b());
  return j;
}

WittScalar scalar_from_json(const WittRing& r, const json& j) {
  if (j.is_number_integer()) return WittScalar::from_int(r, j.get<long long>());
  if (!j.is_object()) throw ConfigError("scalar: integer or {a,b} object expected");
  uint64_t a = j.contains("a") ? digits_value(r, j["a"], "scalar a") : 0;
  uint64_t b = j.contains("b") ? digits_value(r, j["b"], "scalar b") : 0;
  return WittScalar(r, a, b);
}

json curve_to_json(const FormalCurve& cv) {
  json j;
  j["a"] = cv.a;
  j["b"] = cv.b;
  j["c"] = cv.c;
  j["beta"] = scalar_to_json(cv.beta);
  json tails;
  auto arr = [](const std::vector<WittScalar>& v) {
    json a = json::array();
    for (const WittScalar& s : v) a.push_back(scalar_to_json(s));
    return a;
  };
  tails["x"] = arr(cv.xt);
  tails["y"] = arr(cv.yt);
  tails["z"] = arr(cv.zt);
  j["tails"] = tails;
  j["tprec"] = cv.tprec;
  return j;
}

FormalCurve curve_from_json(const WittRing& r, const json& j) {
  if (!j.is_object()) throw ConfigError("curve: object expected");
  if (!j.contains("beta")) throw ConfigError("curve: beta required");
  FormalCurve cv(scalar_from_json(r, j["beta"]));
  if (!cv.beta.is_unit()) throw ConfigError("curve: beta must be a unit");
  cv.a = j.value("a", 1u);
  cv.b = j.value("b", 1u);
  if ((cv.a + cv.b) % 2) throw ConfigError("curve: a + b must be even");
  cv.c = j.value("c", (cv.a + cv.b) / 2);
  if (cv.a + cv.b != 2 * cv.c) throw ConfigError("curve: need a + b = 2c");
  if (cv.a == 0 || cv.b == 0) throw ConfigError("curve: leading exponents must be >= 1");
  if (j.contains("tails")) {
    const json& t = j["tails"];
    if (!t.is_object()) throw ConfigError("curve: tails must be an object");
    auto read = [&](const char* key, std::vector<WittScalar>& out) {
      if (!t.contains(key)) return;
      if (!t[key].is_array()) throw ConfigError("curve: tail lists must be arrays");
      for (const json& e : t[key]) out.push_back(scalar_from_json(r, e));
    };
    read("x", cv.xt);
    read("y", cv.yt);
    read("z", cv.zt);
  }
  cv.tprec = j.value("tprec", 64u);
  if (cv.tprec == 0) throw ConfigError("curve: tprec must be >= 1");
  return cv;
}

json form_to_json(const QuadLattice& L) {
  json j;
  j["rank"] = L.rank;
  j["upper"] = L.upper;
  return j;
}

QuadLattice form_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rank") || !j.contains("upper"))
    throw ConfigError("form: {rank, upper} expected");
  uint32_t r = j["rank"].get<uint32_t>();
  QuadLattice L(r);
  const json& u = j["upper"];
  if (!u.is_array() || u.size() != r) throw ConfigError("form: upper needs rank rows");
  for (uint32_t i = 0; i < r; ++i) {
    if (!u[i].is_array() || u[i].size() != r) throw ConfigError("form: upper rows need rank entries");
    for (uint32_t k = 0; k < r; ++k) {
      long long v = u[i][k].get<long long>();
      if (k < i && v != 0) throw ConfigError("form: entries below the diagonal must be zero");
      L.upper[i][k] = v;
    }
  }
  return L;
}

json series_to_json(const TruncatedSeries& s) {
  json terms = json::array();
  for (const auto& kv : s.terms()) {
    if (kv.second.is_zero()) continue;
    Expo e = Expo::from_key(kv.first);
    json t;
    t["e"] = {e.x, e.y, e.z};
    t["a"] = digits_json(kv.second.ring(), kv.second.a());
    t["b"] = digits_json(kv.second.ring(), kv.second.b());
    terms.push_back(t);
  }
  json j;
  j["pdenom"] = s.pdenom();
  j["terms"] = terms;
  return j;
}

json tval_to_json(const TVal& t) {
  json j;
  j["value"] = t.v;
  j["exact"] = !t.at_least;
  return j;
}

json profile_to_json(const DecayProfile& pr) {
  json j;
  j["A"] = tval_to_json(pr.A);
  j["B"] = tval_to_json(pr.B);
  j["d"] = tval_to_json(pr.d);
  switch (pr.stratum) {
    case CurveStratum::Ordinary: j["stratum"] = "ordinary"; break;
    case CurveStratum::AlmostOrdinary: j["stratum"] = "almost_ordinary"; break;
    case CurveStratum::Supersingular: j["stratum"] = "supersingular"; break;
  }
  j["position"] = {{"abc_equal", pr.position.abc_equal},
                   {"case_two", pr.position.case_two},
                   {"supersingular", pr.position.supersingular}};
  j["refined"] = pr.refined;
  if (pr.refined) {
    j["e_index"] = pr.e_index;
    j["e_boundary"] = pr.e_boundary;
    j["Dq"] = tval_to_json(pr.Dq);
  }
  return j;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace crysect
