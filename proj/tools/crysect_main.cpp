#include <cinttypes>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crysect/admissible.hpp"
#include "crysect/crystal.hpp"
#include "crysect/deformation.hpp"
#include "crysect/intersection.hpp"
#include "crysect/json_io.hpp"
#include "crysect/qlattice.hpp"
#include "crysect/suites.hpp"
#include "crysect/witt.hpp"

using namespace crysect;

namespace {

struct RunOpts {
  uint64_t p = 3;
  std::string eps = "auto";
  uint32_t N = 3;
  uint32_t D = 0;   // 0 = p^2 + p + 2
  uint32_t T = 64;
  uint64_t seed = 0x5eed5u;
  bool quick = false;
};

struct Resolved {
  uint32_t p, eps, N, D, T;
};

bool small_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Resolved resolve(const RunOpts& o) {
  if (o.p < 3 || !small_prime(o.p)) throw ConfigError("p must be an odd prime");
  Resolved r;
  r.p = (uint32_t)o.p;
  if (o.eps == "auto") {
    r.eps = WittRing::auto_eps(r.p);
  } else {
    char* end = nullptr;
    unsigned long v = strtoul(o.eps.c_str(), &end, 10);
    if (!end || *end) throw ConfigError("eps must be a number or 'auto'");
    r.eps = (uint32_t)v;
  }
  if (o.N < 3) throw ConfigError("precision must be at least 3");
  r.N = o.N;
  r.D = o.D ? o.D : r.p * r.p + r.p + 2;
  if (r.D < r.p * r.p + r.p + 2) throw ConfigError("degree bound below p^2+p+2");
  if (o.T < 8) throw ConfigError("tprec must be at least 8");
  r.T = o.T;
  return r;
}

SpecialEndo parse_omega(const std::string& s, const WittRing& ring) {
  SpecialEndo w{};
  std::stringstream ss(s);
  std::string tok;
  int idx = 0;
  while (std::getline(ss, tok, ',')) {
    if (idx >= 5) throw ConfigError("omega needs exactly 5 coordinates");
    size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (...) {
      throw ConfigError("omega coordinate is not a number: " + tok);
    }
    while (pos < tok.size() && isspace((unsigned char)tok[pos])) ++pos;
    if (pos != tok.size()) throw ConfigError("omega coordinate is not a number: " + tok);
    if (v >= ring.modulus()) throw ConfigError("omega coordinate out of range: " + tok);
    w.coord[idx++] = v;
  }
  if (idx != 5) throw ConfigError("omega needs exactly 5 coordinates");
  return w;
}

std::vector<uint64_t> parse_m_set(const std::string& s) {
  std::vector<uint64_t> ms;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    unsigned long long v = 0;
    try {
      v = std::stoull(tok);
    } catch (...) {
      throw ConfigError("m-set entry is not a number: " + tok);
    }
    if (v == 0) throw ConfigError("m values must be positive");
    ms.push_back(v);
  }
  if (ms.empty()) throw ConfigError("empty m-set");
  return ms;
}

std::pair<uint64_t, uint64_t> parse_m_range(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("m-range must look like lo:hi");
  uint64_t lo = 0, hi = 0;
  try {
    lo = std::stoull(s.substr(0, colon));
    hi = std::stoull(s.substr(colon + 1));
  } catch (...) {
    throw ConfigError("m-range must look like lo:hi");
  }
  if (lo == 0 || hi < lo) throw ConfigError("m-range must satisfy 1 <= lo <= hi");
  return {lo, hi};
}

Star parse_star(const std::string& s) {
  if (s == "even") return Star::Even;
  if (s == "odd") return Star::Odd;
  if (s == "void") return Star::Void;
  throw ConfigError("star must be even, odd or void");
}

json mat_to_json(const SeriesMat& M) {
  json rows = json::array();
  for (uint32_t i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (uint32_t j = 0; j < M.cols(); ++j) row.push_back(series_to_json(M.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

void emit(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

// ----------------------------------------------------------- subcommands

int cmd_crystal(const RunOpts& o) {
  Resolved R = resolve(o);
  WittRing ring(R.p, R.N, R.eps);
  CrystalData cd(ring, R.D);
  json j;
  j["p"] = R.p;
  j["eps"] = R.eps;
  j["precision"] = R.N;
  j["degree"] = R.D;
  json g = json::array();
  for (const auto& row : cd.q_prime_upper()) g.push_back(row);
  j["gram_upper"] = g;
  j["u"] = mat_to_json(cd.u_matrix());
  j["frob_v"] = mat_to_json(cd.frob_v_matrix());
  j["frob"] = mat_to_json(cd.frob_matrix());
  j["f_infty"] = mat_to_json(cd.f_infty(0));
  emit(j);
  return 0;
}

int cmd_gseries(const RunOpts& o, uint32_t n, const std::string& star, const std::string& omega,
                uint32_t m) {
  Resolved R = resolve(o);
  if (n < 1) throw ConfigError("n must be at least 1");
  WittRing ring(R.p, R.N, R.eps);
  CrystalData cd(ring, R.D);
  SpecialEndo w = parse_omega(omega, ring);
  Star st = parse_star(star);
  auto comp = m == 0 ? g_series(n, st, w, cd) : g_series_recursive(n, st, w, m, cd);
  json j;
  j["p"] = R.p;
  j["n"] = n;
  j["star"] = star;
  if (m) j["through_level"] = m;
  json comps = json::array();
  for (const TruncatedSeries& s : comp) comps.push_back(series_to_json(s));
  j["components"] = comps;
  emit(j);
  return 0;
}

int cmd_decay(const RunOpts& o, const std::string& curve_path, const std::string& omega,
              uint32_t nmax) {
  Resolved R = resolve(o);
  if (nmax < 1) throw ConfigError("nmax must be at least 1");
  WittRing ring(R.p, R.N, R.eps);
  FormalCurve cv = curve_from_json(ring, load_json(curve_path));
  uint32_t T = std::min(R.T, cv.tprec);
  CurvePullback eng(cv, R.p, R.eps, T);
  SpecialEndo w = parse_omega(omega, ring);
  auto dig = digit_residues(ring, w);
  DecayProfile pr = curve_invariants(eng, dig);
  json j;
  j["curve"] = curve_to_json(cv);
  j["tprec"] = T;
  j["profile"] = profile_to_json(pr);
  json levels = json::array();
  for (uint32_t n = 1; n <= nmax; ++n) {
    json row;
    row["level"] = n;
    row["computed"] = tval_to_json(intersection_multiplicity(eng, n, dig));
    row["predicted"] = tval_to_json(predicted_multiplicity(pr, n, R.p, T));
    levels.push_back(row);
  }
  j["levels"] = levels;
  emit(j);
  return 0;
}

int cmd_density(const RunOpts&, const std::string& form_path, uint64_t l, uint64_t m,
                uint32_t a, bool hanke) {
  if (l < 2 || !small_prime(l)) throw ConfigError("l must be prime");
  if (m == 0) throw ConfigError("m must be positive");
  QuadLattice L = form_from_json(load_json(form_path));
  Rat d = hanke ? local_density_hanke(L, l, m)
                : a ? local_density_limit(L, l, m, a) : local_density_stabilized(L, l, m);
  std::printf("%s\n", d.str().c_str());
  return 0;
}

int cmd_eisenstein(const std::string& form_path, const std::string& mrange, double tol) {
  QuadLattice L = form_from_json(load_json(form_path));
  auto [lo, hi] = parse_m_range(mrange);
  std::printf("m,qL\n");
  for (uint64_t m = lo; m <= hi; ++m)
    std::printf("%" PRIu64 ",%.10g\n", m, eisenstein_coeff(L, m, tol));
  return 0;
}

int cmd_intersect(const RunOpts& o, const std::string& curve_path, const std::string& form_path,
                  const std::string& mset, uint32_t nmax, double tol) {
  Resolved R = resolve(o);
  if (nmax < 1) throw ConfigError("nmax must be at least 1");
  WittRing ring(R.p, R.N, R.eps);
  FormalCurve cv = curve_from_json(ring, load_json(curve_path));
  uint32_t T = std::min(R.T, cv.tprec);
  CurvePullback eng(cv, R.p, R.eps, T);
  QuadLattice model = form_from_json(load_json(form_path));
  std::vector<uint64_t> ms = parse_m_set(mset);
  QuadLattice amb = ambient_lattice();
  IntersectionReport rep = bound_report(eng, model, amb, ms, nmax, tol);
  std::printf("m,lP,gP,ratio,flags\n");
  for (const BoundRow& row : rep.rows)
    std::printf("%" PRIu64 ",%" PRIu64 ",%.10g,%.10g,%s\n", row.m, row.lP, row.gP, row.ratio,
                row.complete ? "C" : (rep.any_truncated ? "T" : "O"));
  return 0;
}

int cmd_verify(const RunOpts& o, const std::string& selector, const std::string& out) {
  SuiteConfig sc;
  sc.seed = o.seed;
  sc.quick = o.quick;
  std::vector<SuiteResult> results = run_suites(expand_selector(selector), sc);
  int passed = 0;
  if (out == "json") {
    json arr = json::array();
    for (const SuiteResult& r : results) {
      json j;
      j["suite"] = r.name;
      j["pass"] = r.pass;
      j["seconds"] = r.seconds;
      j["budget"] = r.budget;
      j["checks"] = r.checks;
      j["detail"] = r.detail;
      arr.push_back(j);
      passed += r.pass;
    }
    json top;
    top["suites"] = arr;
    top["passed"] = passed;
    top["total"] = (int)results.size();
    emit(top);
  } else {
    for (const SuiteResult& r : results) {
      std::printf("%s\n", format_result_line(r).c_str());
      passed += r.pass;
    }
    std::printf("passed %d/%zu\n", passed, results.size());
  }
  return passed == (int)results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superspecial crystal, decay-profile and lattice-count toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file with the shared run fields");

  RunOpts rc;
  app.add_option("--p", rc.p, "odd prime")->capture_default_str();
  app.add_option("--eps", rc.eps, "quadratic nonresidue mod p, or 'auto'")
      ->capture_default_str();
  app.add_option("--precision", rc.N, "p-digit working precision (>= 3)")
      ->capture_default_str();
  app.add_option("--degree", rc.D, "total-degree bound (0 = p^2+p+2)");
  app.add_option("--tprec", rc.T, "t-adic truncation for curve engines")->capture_default_str();
  app.add_option("--seed", rc.seed, "seed for randomized suites");
  app.add_flag("--quick", rc.quick, "reduced sample counts in verify");

  auto* crystal = app.add_subcommand("crystal", "dump the crystal matrices as JSON");
  crystal->fallthrough();
  std::string crystal_out = "json";
  crystal->add_option("--out", crystal_out, "json");

  auto* gseries = app.add_subcommand("gseries", "graded image of a special endomorphism");
  gseries->fallthrough();
  uint32_t gs_n = 2, gs_m = 0;
  std::string gs_star = "even", gs_omega;
  gseries->add_option("--n", gs_n, "level")->capture_default_str();
  gseries->add_option("--star", gs_star, "even | odd | void")->capture_default_str();
  gseries->add_option("--omega", gs_omega, "five comma-separated coordinates")->required();
  gseries->add_option("--m", gs_m, "rebuild through this level (0 = direct)");

  auto* decay = app.add_subcommand("decay", "multiplicity profile of a curve");
  decay->fallthrough();
  std::string dc_curve, dc_omega;
  uint32_t dc_nmax = 2;
  decay->add_option("--curve", dc_curve, "curve JSON file")->required();
  decay->add_option("--omega", dc_omega, "five comma-separated coordinates")->required();
  decay->add_option("--nmax", dc_nmax, "levels to report")->capture_default_str();

  auto* density = app.add_subcommand("density", "local representation density");
  density->fallthrough();
  std::string de_form;
  uint64_t de_l = 3, de_m = 1;
  uint32_t de_a = 0;
  bool de_hanke = false;
  density->add_option("--form", de_form, "form JSON file")->required();
  density->add_option("--l", de_l, "prime")->capture_default_str();
  density->add_option("--m", de_m, "target value")->capture_default_str();
  density->add_option("--a", de_a, "fixed solution-count exponent (0 = stabilized)");
  density->add_flag("--hanke", de_hanke, "use the closed form");

  auto* eis = app.add_subcommand("eisenstein", "negative-coefficient profile as CSV");
  eis->fallthrough();
  std::string ei_form, ei_range = "1:100";
  double ei_tol = 1e-8;
  eis->add_option("--form", ei_form, "form JSON file")->required();
  eis->add_option("--m-range", ei_range, "lo:hi")->capture_default_str();
  eis->add_option("--tol", ei_tol, "series tail tolerance")->capture_default_str();

  auto* isect = app.add_subcommand("intersect", "filtered counts against the global profile");
  isect->fallthrough();
  std::string is_curve, is_form, is_mset;
  uint32_t is_nmax = 3;
  double is_tol = 1e-8;
  isect->add_option("--curve", is_curve, "curve JSON file")->required();
  isect->add_option("--lattice", is_form, "model form JSON file")->required();
  isect->add_option("--m-set", is_mset, "comma-separated m values")->required();
  isect->add_option("--nmax", is_nmax, "filtration depth")->capture_default_str();
  isect->add_option("--tol", is_tol, "series tail tolerance")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run named invariant suites");
  verify->fallthrough();
  std::string vf_suite = "all", vf_out = "text";
  verify->add_option("--suite", vf_suite, "suite name, group alias or 'all'")
      ->capture_default_str();
  verify->add_option("--out", vf_out, "text | json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const char* stage = "cli";
  try {
    if (crystal->parsed()) {
      stage = "crystal";
      if (crystal_out != "json") throw ConfigError("crystal supports --out json only");
      return cmd_crystal(rc);
    }
    if (gseries->parsed()) {
      stage = "gseries";
      return cmd_gseries(rc, gs_n, gs_star, gs_omega, gs_m);
    }
    if (decay->parsed()) {
      stage = "decay";
      return cmd_decay(rc, dc_curve, dc_omega, dc_nmax);
    }
    if (density->parsed()) {
      stage = "density";
      return cmd_density(rc, de_form, de_l, de_m, de_a, de_hanke);
    }
    if (eis->parsed()) {
      stage = "eisenstein";
      return cmd_eisenstein(ei_form, ei_range, ei_tol);
    }
    if (isect->parsed()) {
      stage = "intersect";
      return cmd_intersect(rc, is_curve, is_form, is_mset, is_nmax, is_tol);
    }
    if (verify->parsed()) {
      stage = "verify";
      return cmd_verify(rc, vf_suite, vf_out);
    }
  } catch (const PrecisionExhausted& e) {
    std::fprintf(stderr, "precision exhausted in %s: %s\n", stage, e.what());
    return 3;
  } catch (const DegreeBoundError& e) {
    std::fprintf(stderr, "degree budget exhausted in %s: %s\n", stage, e.what());
    return 3;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error in %s: %s\n", stage, e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error in %s: %s\n", stage, e.what());
    return 1;
  }
  return 2;
}
