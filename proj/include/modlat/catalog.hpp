#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "modlat/lattice.hpp"

namespace modlat {

struct CatalogEntry {
  std::string name;
  std::int64_t level = 1;  // claimed; for odd lattices the modular level
  IntMatrix gram;
  std::string note;
  std::optional<Rat> det;
  std::optional<bool> even;
  std::optional<Rat> min;

  Lattice lattice() const { return lattice_from_ints(gram); }
};

/// Basic recomputes det, parity and level; Full adds the minimum and formal
/// strong modularity (theta series of the rescaled partial duals).
enum class Validation { None, Basic, Full };

struct EntryCheck {
  std::string name;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// JSON array of {"name","level","gram","note"} with optional "det", "even",
/// "min". Errors carry the line number.
std::vector<CatalogEntry> parse_catalog(const std::string& text);

std::vector<EntryCheck> check_catalog(const std::vector<CatalogEntry>& entries, Validation level);

/// Parses and validates; throws ValidationMismatch naming the first bad entry.
std::vector<CatalogEntry> load_catalog(const std::filesystem::path& path, Validation level = Validation::Basic);
std::vector<CatalogEntry> load_catalog_text(const std::string& text, Validation level = Validation::Basic);

/// The catalogue compiled into the library.
const std::string& builtin_catalog_text();

/// Catalogue used by name lookups; the builtin one unless replaced.
const std::vector<CatalogEntry>& active_catalog();
void set_active_catalog(std::vector<CatalogEntry> entries);

/// Throws Catalog listing the known names.
const CatalogEntry& find_entry(const std::string& name);
const CatalogEntry& find_entry(const std::vector<CatalogEntry>& entries, const std::string& name);

/// Name of the minimal strongly N-modular base lattice (dimension 2 d_N).
std::string base_lattice_name(std::int64_t level);

}  // namespace modlat
