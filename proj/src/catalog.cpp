#include "modlat/catalog.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "modlat/enumeration.hpp"
#include "modlat/errors.hpp"
#include "modlat/level_data.hpp"
#include "modlat/modular.hpp"

namespace modlat {

namespace detail {
extern const char* const kBuiltinCatalog;
}

namespace {

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

Rat parse_rational(const nlohmann::json& v, const std::string& what) {
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) {
    Rat r;
    if (r.set_str(v.get<std::string>(), 10) != 0) raise(ErrorKind::Parse, what + ": not a rational number");
    r.canonicalize();
    return r;
  }
  raise(ErrorKind::Parse, what + ": expected an integer or a rational string");
}

CatalogEntry parse_entry(const nlohmann::json& e, std::size_t index) {
  const std::string where = "catalogue entry " + std::to_string(index);
  if (!e.is_object()) raise(ErrorKind::Parse, where + " is not an object");
  CatalogEntry c;
  try {
    c.name = e.at("name").get<std::string>();
    c.level = e.at("level").get<std::int64_t>();
    c.note = e.value("note", std::string());
    const auto& rows = e.at("gram");
    const std::size_t n = rows.size();
    c.gram = IntMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) raise(ErrorKind::Parse, where + " (" + c.name + "): Gram matrix is not square");
      for (std::size_t j = 0; j < n; ++j) c.gram(i, j) = Int(rows[i][j].get<long>());
    }
    if (e.contains("det")) c.det = parse_rational(e["det"], where + " det");
    if (e.contains("even")) c.even = e["even"].get<bool>();
    if (e.contains("min")) c.min = parse_rational(e["min"], where + " min");
  } catch (const nlohmann::json::exception& ex) {
    raise(ErrorKind::Parse, where + ": " + ex.what());
  }
  return c;
}

std::mutex g_catalog_mutex;
std::optional<std::vector<CatalogEntry>> g_active;

}  // namespace

std::vector<CatalogEntry> parse_catalog(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    raise(ErrorKind::Parse, "catalogue line " + std::to_string(line_of(text, ex.byte)) + ": " + ex.what());
  }
  if (!doc.is_array()) raise(ErrorKind::Parse, "catalogue line 1: top level must be an array");
  std::vector<CatalogEntry> out;
  for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(parse_entry(doc[i], i));
  return out;
}

std::vector<EntryCheck> check_catalog(const std::vector<CatalogEntry>& entries, Validation level) {
  std::vector<EntryCheck> out;
  if (level == Validation::None) return out;
  for (const auto& e : entries) {
    EntryCheck chk{e.name, {}};
    try {
      const Lattice l = e.lattice();
      if (!l.integral()) chk.problems.push_back("Gram matrix is not integral");
      if (e.det && *e.det != l.det())
        chk.problems.push_back("claimed det " + e.det->get_str() + ", computed " + l.det().get_str());
      if (e.even && *e.even != l.even())
        chk.problems.push_back(std::string("claimed ") + (*e.even ? "even" : "odd") + ", computed " +
                               (l.even() ? "even" : "odd"));
      const auto lv = modular_level(l);
      if (lv != e.level)
        chk.problems.push_back("claimed level " + std::to_string(e.level) + ", computed " + std::to_string(lv));
      if (level == Validation::Full && chk.ok()) {
        const auto m = minimum(l);
        if (e.min && *e.min != m.min)
          chk.problems.push_back("claimed min " + e.min->get_str() + ", computed " + m.min.get_str());
        if (is_admissible_level(e.level)) {
          ModularCheckOptions opt;
          opt.isometry = false;
          const auto v = check_modular(l, opt);
          if (!v.formally_strongly_modular())
            chk.problems.push_back("not formally strongly " + std::to_string(e.level) + "-modular");
          for (auto N : kAdmissibleLevels) {
            if (base_lattice_name(N) == e.name && l.dim() != static_cast<std::size_t>(2 * level_data(N).dN))
              chk.problems.push_back("base lattice dimension differs from 2 d_N");
          }
        }
      }
    } catch (const Error& ex) {
      chk.problems.push_back(ex.what());
    }
    out.push_back(std::move(chk));
  }
  return out;
}

std::vector<CatalogEntry> load_catalog_text(const std::string& text, Validation level) {
  auto entries = parse_catalog(text);
  for (const auto& chk : check_catalog(entries, level)) {
    if (!chk.ok()) {
      std::string msg = "catalogue entry " + chk.name + ":";
      for (const auto& p : chk.problems) msg += " " + p + ";";
      raise(ErrorKind::ValidationMismatch, msg);
    }
  }
  return entries;
}

std::vector<CatalogEntry> load_catalog(const std::filesystem::path& path, Validation level) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::Catalog, "cannot open catalogue " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_catalog_text(ss.str(), level);
}

const std::string& builtin_catalog_text() {
  static const std::string text(detail::kBuiltinCatalog);
  return text;
}

const std::vector<CatalogEntry>& active_catalog() {
  std::lock_guard lock(g_catalog_mutex);
  if (!g_active) g_active = load_catalog_text(builtin_catalog_text(), Validation::Basic);
  return *g_active;
}

void set_active_catalog(std::vector<CatalogEntry> entries) {
  std::lock_guard lock(g_catalog_mutex);
  g_active = std::move(entries);
}

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& entries, const std::string& name) {
  for (const auto& e : entries)
    if (e.name == name) return e;
  std::string known;
  for (const auto& e : entries) known += (known.empty() ? "" : ", ") + e.name;
  raise(ErrorKind::Catalog, "unknown lattice '" + name + "'; known: " + known);
}

const CatalogEntry& find_entry(const std::string& name) { return find_entry(active_catalog(), name); }

std::string base_lattice_name(std::int64_t level) {
  switch (level) {
    case 1: return "E8";
    case 2: return "D4";
    case 3: return "A2";
    default: break;
  }
  if (!is_admissible_level(level))
    raise(ErrorKind::LevelNotAdmissible, "no base lattice for inadmissible level " + std::to_string(level));
  return "Base" + std::to_string(level);
}

}  // namespace modlat
