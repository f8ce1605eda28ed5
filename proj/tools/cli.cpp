#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "modlat/catalog.hpp"
#include "modlat/designs.hpp"
#include "modlat/enumeration.hpp"
#include "modlat/errors.hpp"
#include "modlat/lattice.hpp"
#include "modlat/level_data.hpp"
#include "modlat/modular.hpp"
#include "modlat/report.hpp"
#include "modlat/shadow.hpp"

namespace modlat {

namespace {

struct Settings {
  bool json = false;
  bool timing = false;
  unsigned threads = 0;
  std::string catalog;
  std::string lattice;
  std::int64_t level = 0;
  std::int64_t weight = 0;
  QSeries::Exponent prec = 0;
  std::string bound;
  int t = 0;
  std::uint64_t seed = 1;
  std::size_t witnesses = 100;
  std::string alpha;
  std::uint64_t iso_budget = 1'000'000;
  bool no_isometry = false;
  std::string validate = "basic";
  std::int64_t n = 0;
  std::string min;
  std::string det;
};

// A usage problem found after parsing.
struct UsageError {
  std::string message;
};

Rat parse_rat(const std::string& s, const char* what) {
  Rat r;
  try {
    r = Rat(s);
  } catch (const std::invalid_argument&) {
    throw UsageError{std::string("invalid ") + what + " '" + s + "'"};
  }
  r.canonicalize();
  return r;
}

std::vector<std::int64_t> parse_row(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError{"invalid integer '" + item + "' in --alpha"};
    }
  }
  return out;
}

struct NamedLattice {
  std::string name;
  Lattice lattice;
  const CatalogEntry* entry = nullptr;
};

NamedLattice resolve_lattice(const std::string& arg) {
  if (arg.empty()) throw UsageError{"--lattice is required"};
  if (arg.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(arg);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError{std::string("--lattice is not a JSON Gram matrix: ") + e.what()};
    }
    RatMatrix g(j.size(), j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_array() || j[i].size() != j.size()) raise(ErrorKind::Shape, "Gram matrix must be square");
      for (std::size_t k = 0; k < j.size(); ++k)
        g(i, k) = j[i][k].is_string() ? parse_rat(j[i][k].get<std::string>(), "Gram entry") : Rat(j[i][k].get<long>());
    }
    return {"gram", validate_lattice(g), nullptr};
  }
  auto digits = [](const std::string& s) {
    return !s.empty() && s.size() < 6 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  for (const auto& e : active_catalog())
    if (e.name == arg) return {e.name, e.lattice(), &e};
  if (arg.size() > 1 && arg[0] == 'Z' && digits(arg.substr(1)))
    return {arg, standard_lattice(std::stoul(arg.substr(1))), nullptr};
  if (arg.size() > 1 && arg[0] == 'C' && digits(arg.substr(1)))
    return {arg, c_n_lattice(std::stoll(arg.substr(1))), nullptr};
  const CatalogEntry& e = find_entry(arg);  // throws with the known names
  return {e.name, e.lattice(), &e};
}

nlohmann::json gram_json(const RatMatrix& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < g.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < g.cols(); ++j) r.push_back(g(i, j).get_str());
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json int_matrix_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).get_str());
    rows.push_back(r);
  }
  return rows;
}

CertReport result(const std::string& verb, const std::string& summary) {
  CertReport r;
  r.check = verb;
  r.verdict = Verdict::Pass;
  r.summary = summary;
  return r;
}

CertReport do_info(const Settings& s, const EnumerationOptions& opt) {
  const auto nl = resolve_lattice(s.lattice);
  const Lattice& l = nl.lattice;
  CertReport r = result("info", nl.name + ": dimension " + std::to_string(l.dim()) + ", det " + l.det().get_str());
  r.details["name"] = nl.name;
  r.details["dim"] = l.dim();
  r.details["det"] = l.det().get_str();
  r.details["integral"] = l.integral();
  r.details["even"] = l.even();
  if (l.integral()) r.details["level"] = modular_level(l);
  const auto m = minimum(l, opt);
  r.details["min"] = m.min.get_str();
  r.details["kissing"] = m.count;
  r.details["gram"] = gram_json(l.gram());
  if (nl.entry && !nl.entry->note.empty()) r.details["note"] = nl.entry->note;
  return r;
}

CertReport do_theta(const Settings& s, const EnumerationOptions& opt) {
  const auto nl = resolve_lattice(s.lattice);
  QSeries th;
  if (!s.bound.empty()) {
    th = theta_window(nl.lattice, parse_rat(s.bound, "--bound"), opt);
  } else {
    const auto p = s.prec > 0 ? s.prec : 10;
    th = nl.lattice.integral() ? theta_series(nl.lattice, p, opt) : theta_window(nl.lattice, Rat(p - 1), opt);
  }
  CertReport r = result("theta", th.to_string());
  r.details["lattice"] = nl.name;
  r.details["series"] = th.to_json();
  return r;
}

CertReport do_min(const Settings& s, const EnumerationOptions& opt) {
  const auto nl = resolve_lattice(s.lattice);
  const auto m = minimum(nl.lattice, opt);
  CertReport r = result("min", "min " + m.min.get_str() + " attained by " + std::to_string(m.count) + " vectors");
  r.details["lattice"] = nl.name;
  r.details["min"] = m.min.get_str();
  r.details["count"] = m.count;
  return r;
}

CertReport do_extremal_form(const Settings& s) {
  if (s.level == 0 || s.weight == 0) throw UsageError{"extremal-form needs --level and --weight"};
  const auto d = level_data(s.level);
  const std::int64_t l = s.weight / d.kN;
  const QSeries::Exponent p = s.prec > 0 ? s.prec : std::max<QSeries::Exponent>(10, 2 * l + 4);
  const ExtremalForm f = extremal_form(s.level, s.weight, p);
  CertReport r = result("extremal-form", f.series.to_string());
  r.details["level"] = f.level;
  r.details["weight"] = f.weight;
  r.details["l"] = f.l;
  r.details["min_bound"] = extremal_min_bound(s.level, s.weight);
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : f.coefficients) coeffs.push_back(c.get_str());
  r.details["basis_coefficients"] = coeffs;
  r.details["series"] = f.series.to_json();
  return r;
}

ModularCheckOptions modular_options(const Settings& s, const EnumerationOptions& opt) {
  ModularCheckOptions mo;
  if (s.prec > 0) mo.precision = s.prec;
  mo.isometry = !s.no_isometry;
  mo.isometry_budget = s.iso_budget;
  mo.enumeration = opt;
  return mo;
}

CertReport do_check_modular(const Settings& s, const EnumerationOptions& opt) {
  const auto nl = resolve_lattice(s.lattice);
  const ModularityVerdict v = check_modular(nl.lattice, modular_options(s, opt));
  CertReport r;
  r.check = "check-modular";
  r.details["lattice"] = nl.name;
  r.details["level"] = v.level;
  r.details["window"] = v.window;
  nlohmann::json divs = nlohmann::json::array();
  std::vector<std::string> open;
  for (const auto& d : v.divisors) {
    nlohmann::json e = {{"m", d.m}, {"status", to_string(d.status)}, {"formal", d.formal}, {"nodes", d.nodes}};
    if (d.first_difference) e["first_difference"] = *d.first_difference;
    if (!d.reason.empty()) e["reason"] = d.reason;
    if (d.isometry) e["isometry"] = int_matrix_json(*d.isometry);
    if (d.status != ModularStatus::ExactPass) open.push_back(std::to_string(d.m));
    divs.push_back(e);
  }
  r.details["divisors"] = divs;
  const std::string lv = std::to_string(v.level);
  if (v.strongly_modular()) {
    r.verdict = Verdict::Pass;
    r.summary = "strongly " + lv + "-modular: isometries found for every exact divisor";
  } else if (v.formally_strongly_modular()) {
    const bool exhausted = std::any_of(v.divisors.begin(), v.divisors.end(),
                                       [](const auto& d) { return d.status == ModularStatus::Inconclusive; });
    r.verdict = exhausted ? Verdict::Inconclusive : Verdict::Pass;
    std::string list;
    for (const auto& m : open) list += (list.empty() ? "" : ",") + m;
    r.summary = "formally strongly " + lv + "-modular below q^" + std::to_string(v.window) +
                "; no isometry for m = " + list;
    if (exhausted) r.details["hint"] = "raise --iso-budget for an exact certificate";
  } else {
    r.verdict = Verdict::Fail;
    r.summary = "not strongly " + lv + "-modular";
  }
  return r;
}

CertReport do_check_extremal(const Settings& s, const EnumerationOptions& opt) {
  const auto nl = resolve_lattice(s.lattice);
  const auto mo = modular_options(s, opt);
  CertReport r = nl.lattice.even() || !nl.lattice.integral()
                     ? check_extremal(nl.lattice, mo)
                     : check_extremal_odd(nl.lattice, s.level > 0 ? s.level : modular_level(nl.lattice), mo);
  r.details["lattice"] = nl.name;
  return r;
}

CertReport do_check_design(const Settings& s, const EnumerationOptions& opt) {
  const auto nl = resolve_lattice(s.lattice);
  if (s.t < 1) throw UsageError{"check-design needs --t >= 1"};
  DesignTestConfig cfg;
  cfg.degrees.clear();
  for (int d = 2; d <= s.t; d += 2) cfg.degrees.push_back(d);
  cfg.seed = s.seed;
  cfg.witnesses = s.witnesses;
  const VectorLayer layer = minimal_vectors(nl.lattice, opt);
  CertReport r;
  if (cfg.degrees.empty()) {
    r.check = "design";
    r.verdict = Verdict::Pass;
    r.summary = "every centrally symmetric set is a 1-design";
  } else {
    r = design_test(nl.lattice, layer, cfg);
  }
  r.check = "check-design";
  r.details["lattice"] = nl.name;
  r.details["t"] = s.t;
  if (r.passed()) r.summary = "minimal vectors form a " + std::to_string(s.t) + "-design: " + r.summary;
  if (nl.entry) {
    const auto k = static_cast<std::int64_t>(nl.lattice.dim()) / 2;
    if (nl.lattice.dim() % 2 == 0)
      if (auto t = predicted_design_strength(nl.entry->level, k)) r.details["predicted_strength"] = *t;
  }
  return r;
}

CertReport do_check_strongly_perfect(const Settings& s, const EnumerationOptions& opt) {
  const auto nl = resolve_lattice(s.lattice);
  CertReport r = is_strongly_perfect(nl.lattice, opt);
  r.check = "check-strongly-perfect";
  r.details["lattice"] = nl.name;
  const std::size_t n = nl.lattice.dim();
  r.details["perfection_rank"] = perfection_rank(nl.lattice, opt);
  r.details["perfect"] = perfection_rank(nl.lattice, opt) == n * (n + 1) / 2;
  const EutaxyReport e = eutaxy_check(nl.lattice, opt);
  r.details["eutaxy"] = to_string(e.kind);
  if (e.lambda) r.details["eutaxy_lambda"] = e.lambda->get_str();
  if (r.passed()) {
    const CertReport mp = min_product_check(nl.lattice, opt);
    r.details["min_product"] = mp.details["product"];
    r.details["min_product_threshold"] = mp.details["threshold"];
  }
  return r;
}

CertReport do_harmonic_theta(const Settings& s, const EnumerationOptions& opt) {
  const auto nl = resolve_lattice(s.lattice);
  if (s.t < 1) throw UsageError{"harmonic-theta needs --t >= 1"};
  if (s.alpha.empty()) throw UsageError{"harmonic-theta needs --alpha"};
  const auto alpha = parse_row(s.alpha);
  const ZonalHarmonic p = zonal_harmonic(nl.lattice.dim(), s.t, alpha);
  const Rat bound = s.bound.empty() ? Rat(s.prec > 0 ? s.prec - 1 : 6) : parse_rat(s.bound, "--bound");
  const QSeries h = harmonic_theta_truncation(nl.lattice, p, bound, opt);
  CertReport r = result("harmonic-theta", h.to_string());
  r.details["lattice"] = nl.name;
  r.details["t"] = s.t;
  r.details["alpha"] = alpha;
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coefficients()) coeffs.push_back(c.get_str());
  r.details["zonal_coefficients"] = coeffs;
  r.details["series"] = h.to_json();
  r.details["vanishes"] = h.is_zero();
  return r;
}

CertReport do_shadow(const Settings& s, const EnumerationOptions& opt) {
  const auto nl = resolve_lattice(s.lattice);
  const std::int64_t level = s.level > 0 ? s.level : (nl.lattice.integral() ? modular_level(nl.lattice) : 1);
  const ShadowReport sr = shadow_min(nl.lattice, level, opt);
  const Rat bound = s.bound.empty() ? Rat(sr.min0 + 2) : parse_rat(s.bound, "--bound");
  const QSeries th = shadow_theta(nl.lattice, bound, opt);
  CertReport r = result("shadow", "shadow minimum " + sr.min0.get_str() + " attained by " +
                                      std::to_string(sr.count) + " vectors; m = " + sr.m.get_str());
  r.details["lattice"] = nl.name;
  r.details["level"] = sr.level;
  r.details["l"] = sr.l;
  r.details["min0"] = sr.min0.get_str();
  r.details["count"] = sr.count;
  r.details["m"] = sr.m.get_str();
  r.details["m_admissible"] = sr.m_admissible;
  if (sr.m_admissible) r.details["formula_min0"] = sr.predicted.get_str();
  r.details["odd_min_bound"] = odd_min_bound(sr.level, static_cast<std::int64_t>(sr.dim));
  r.details["theta"] = th.to_string();
  r.details["note"] = "rational equivalence to a power of C_N is not verified";
  return r;
}

CertReport do_density(const Settings& s, const EnumerationOptions& opt) {
  DensityReport d;
  std::string name;
  if (!s.lattice.empty()) {
    const auto nl = resolve_lattice(s.lattice);
    name = nl.name;
    d = density(nl.lattice, s.min.empty() ? minimum(nl.lattice, opt).min : parse_rat(s.min, "--min"));
  } else {
    if (s.n <= 0 || s.min.empty()) throw UsageError{"density needs --lattice, or --n and --min (and --det)"};
    d = density(static_cast<std::size_t>(s.n), parse_rat(s.min, "--min"), s.det.empty() ? Rat(1) : parse_rat(s.det, "--det"));
  }
  std::ostringstream os;
  os.precision(12);
  os << "delta = " << d.delta;
  CertReport r = result("density", os.str());
  if (!name.empty()) r.details["lattice"] = name;
  r.details["n"] = d.n;
  r.details["min"] = d.min.get_str();
  r.details["det"] = d.det.get_str();
  r.details["ratio_squared"] = d.ratio_squared.get_str();
  if (d.ratio) r.details["ratio"] = d.ratio->get_str();
  r.details["delta"] = d.delta;
  r.details["log10_ratio"] = d.log10_ratio;
  return r;
}

CertReport do_catalog(const Settings& s) {
  Validation v = Validation::Basic;
  if (s.validate == "none")
    v = Validation::None;
  else if (s.validate == "full")
    v = Validation::Full;
  else if (s.validate != "basic")
    throw UsageError{"--validate must be none, basic or full"};
  const auto& entries = active_catalog();
  const auto checks = check_catalog(entries, v);
  CertReport r;
  r.check = "catalog";
  nlohmann::json list = nlohmann::json::array();
  std::size_t bad = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    nlohmann::json j = {{"name", e.name}, {"dim", e.gram.rows()}, {"level", e.level}};
    if (e.det) j["det"] = e.det->get_str();
    if (e.min) j["min"] = e.min->get_str();
    if (e.even) j["even"] = *e.even;
    if (!e.note.empty()) j["note"] = e.note;
    if (!checks[i].ok()) {
      j["problems"] = checks[i].problems;
      ++bad;
    }
    list.push_back(j);
  }
  r.details["entries"] = list;
  r.details["validation"] = s.validate;
  r.verdict = bad == 0 ? Verdict::Pass : Verdict::Fail;
  r.summary = std::to_string(entries.size()) + " entries, " + std::to_string(bad) + " with problems";
  return r;
}

// Plain text for computation verbs: the main value, then details.
std::string render_text(const CertReport& r, bool timing, bool computation) {
  if (!computation) return r.render(false, timing);
  std::ostringstream os;
  os << r.summary << "\n";
  for (const auto& [key, value] : r.details.items()) {
    if (key == "series") continue;
    os << "  " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
  if (timing) os << "  seconds: " << r.seconds << "\n";
  return os.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Theta series, extremal modular forms and lattice certification"};
  app.name("modlat");
  app.fallthrough();
  app.require_subcommand(1);
  Settings s;
  app.add_flag("--json", s.json, "JSON output");
  app.add_flag("--timing", s.timing, "include wall time");
  app.add_option("--threads", s.threads, "worker threads (0: MODLAT_THREADS or all cores)");
  app.add_option("--catalog", s.catalog, "catalogue JSON file replacing the builtin one");

  auto lattice_opt = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--lattice", s.lattice, "catalogue name, Z<n>, C<N> or a JSON Gram matrix");
    if (required) o->required();
  };
  auto* info = app.add_subcommand("info", "invariants of a lattice");
  lattice_opt(info, true);
  auto* theta = app.add_subcommand("theta", "theta series by exact enumeration");
  lattice_opt(theta, true);
  theta->add_option("--bound", s.bound, "all norms up to this bound");
  theta->add_option("--prec", s.prec, "coefficients below q^prec");
  auto* min = app.add_subcommand("min", "minimum and kissing number");
  lattice_opt(min, true);
  auto* ef = app.add_subcommand("extremal-form", "extremal modular form f_{N,k}");
  ef->add_option("--level", s.level)->required();
  ef->add_option("--weight", s.weight)->required();
  ef->add_option("--prec", s.prec, "coefficients below q^prec");
  auto* cm = app.add_subcommand("check-modular", "strong modularity against all rescaled partial duals");
  lattice_opt(cm, true);
  cm->add_option("--prec", s.prec, "theta comparison window in q (default 20)");
  cm->add_option("--iso-budget", s.iso_budget, "isometry search node budget");
  cm->add_flag("--no-isometry", s.no_isometry, "theta comparison only");
  auto* ce = app.add_subcommand("check-extremal", "extremality of a strongly modular lattice");
  lattice_opt(ce, true);
  ce->add_option("--level", s.level, "level for odd lattices");
  ce->add_option("--prec", s.prec, "theta comparison window in q");
  ce->add_option("--iso-budget", s.iso_budget, "isometry search node budget");
  auto* cd = app.add_subcommand("check-design", "spherical t-design test on the minimal vectors");
  lattice_opt(cd, true);
  cd->add_option("--t", s.t, "design strength")->required();
  cd->add_option("--seed", s.seed, "witness seed");
  cd->add_option("--witnesses", s.witnesses, "witness directions for degrees above 6");
  auto* sp = app.add_subcommand("check-strongly-perfect", "minimal vectors form a 4-design");
  lattice_opt(sp, true);
  auto* ht = app.add_subcommand("harmonic-theta", "theta series with a zonal harmonic coefficient");
  lattice_opt(ht, true);
  ht->add_option("--t", s.t, "harmonic degree")->required();
  ht->add_option("--alpha", s.alpha, "direction in lattice coordinates, comma separated")->required();
  ht->add_option("--bound", s.bound, "norm bound (default 6)");
  auto* sh = app.add_subcommand("shadow", "shadow theta series and minimum of an odd lattice");
  lattice_opt(sh, true);
  sh->add_option("--level", s.level, "odd level N");
  sh->add_option("--bound", s.bound, "norm bound (default min + 2)");
  auto* de = app.add_subcommand("density", "packing density");
  lattice_opt(de, false);
  de->add_option("--n", s.n, "dimension");
  de->add_option("--min", s.min, "minimum");
  de->add_option("--det", s.det, "determinant (default 1)");
  auto* ca = app.add_subcommand("catalog", "list and validate the catalogue");
  ca->add_option("--validate", s.validate, "none, basic or full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  EnumerationOptions opt;
  opt.threads = s.threads;
  const bool computation = info->parsed() || theta->parsed() || min->parsed() || ef->parsed() || ht->parsed() ||
                           sh->parsed() || de->parsed();
  CertReport r;
  try {
    if (s.catalog.empty())
      set_active_catalog(load_catalog_text(builtin_catalog_text(), Validation::None));
    else
      set_active_catalog(load_catalog(s.catalog, Validation::Basic));
    if (info->parsed())
      r = do_info(s, opt);
    else if (theta->parsed())
      r = do_theta(s, opt);
    else if (min->parsed())
      r = do_min(s, opt);
    else if (ef->parsed())
      r = do_extremal_form(s);
    else if (cm->parsed())
      r = do_check_modular(s, opt);
    else if (ce->parsed())
      r = do_check_extremal(s, opt);
    else if (cd->parsed())
      r = do_check_design(s, opt);
    else if (sp->parsed())
      r = do_check_strongly_perfect(s, opt);
    else if (ht->parsed())
      r = do_harmonic_theta(s, opt);
    else if (sh->parsed())
      r = do_shadow(s, opt);
    else if (de->parsed())
      r = do_density(s, opt);
    else
      r = do_catalog(s);
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n";
    return 2;
  } catch (const CapacityError& e) {
    err << "inconclusive: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << (s.json ? r.render(true, s.timing) : render_text(r, s.timing, computation));
  return exit_code(r.verdict);
}

}  // namespace modlat
