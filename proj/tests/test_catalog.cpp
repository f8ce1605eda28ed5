#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "modlat/catalog.hpp"
#include "modlat/enumeration.hpp"
#include "modlat/level_data.hpp"

using namespace modlat;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InternalInconsistency;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const char* kSmall = R"([
  {"name": "A2", "level": 3, "gram": [[2, -1], [-1, 2]], "note": "root lattice", "det": "3", "even": true, "min": 2},
  {"name": "Z2", "level": 1, "gram": [[1, 0], [0, 1]], "note": ""}
])";

}  // namespace

TEST_CASE("builtin catalogue validates fully") {
  const auto entries = parse_catalog(builtin_catalog_text());
  CHECK(entries.size() == 14);
  const auto checks = check_catalog(entries, Validation::Full);
  REQUIRE(checks.size() == entries.size());
  for (const auto& c : checks) CHECK_MESSAGE(c.ok(), c.name << ": " << (c.problems.empty() ? "" : c.problems[0]));
}

TEST_CASE("catalogue lattices have their stated invariants") {
  const std::map<std::string, std::pair<std::size_t, std::int64_t>> dim_min = {
      {"E8", {8, 2}},   {"D4", {4, 2}},    {"A2", {2, 2}},    {"K12", {12, 4}},
      {"BW16", {16, 4}}, {"D12+", {12, 2}}, {"Base23", {2, 2}}};
  for (const auto& [name, dm] : dim_min) {
    const Lattice l = find_entry(name).lattice();
    CHECK(l.dim() == dm.first);
    CHECK(minimum(l).min == dm.second);
  }
  for (std::int64_t n : kAdmissibleLevels) {
    const auto& e = find_entry(base_lattice_name(n));
    CHECK(e.level == n);
    CHECK(e.gram.rows() == static_cast<std::size_t>(2 * level_data(n).dN));
    CHECK(e.lattice().even());
  }
}

TEST_CASE("parsing") {
  const auto entries = parse_catalog(kSmall);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].name == "A2");
  CHECK(entries[0].det == Rat(3));
  CHECK(entries[0].even == true);
  CHECK(entries[0].min == Rat(2));
  CHECK_FALSE(entries[1].det.has_value());
  CHECK(parse_catalog("").empty());
  CHECK(parse_catalog("  \n ").empty());
  CHECK(load_catalog_text(kSmall, Validation::Full).size() == 2);

  const std::string broken = "[\n {\"name\": \"A2\",\n  \"level\": 3,\n  \"gram\": [[2, -1], [-1, 2]\n}]";
  CHECK(kind_of([&] { parse_catalog(broken); }) == ErrorKind::Parse);
  CHECK(message_of([&] { parse_catalog(broken); }).find("line 5") != std::string::npos);
  CHECK(kind_of([] { parse_catalog(R"({"name": "x"})"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_catalog(R"([{"name": "x", "level": 1, "gram": [[1, 0]], "note": ""}])"); }) ==
        ErrorKind::Parse);
}

TEST_CASE("wrong claims are rejected") {
  const std::string wrong_level = R"([{"name": "E8x", "level": 2, "note": "",
    "gram": [[2,0,-1,0,0,0,0,0],[0,2,0,-1,0,0,0,0],[-1,0,2,-1,0,0,0,0],[0,-1,-1,2,-1,0,0,0],
             [0,0,0,-1,2,-1,0,0],[0,0,0,0,-1,2,-1,0],[0,0,0,0,0,-1,2,-1],[0,0,0,0,0,0,-1,2]]}])";
  CHECK(kind_of([&] { load_catalog_text(wrong_level, Validation::Basic); }) == ErrorKind::ValidationMismatch);
  CHECK(message_of([&] { load_catalog_text(wrong_level, Validation::Basic); }).find("E8x") != std::string::npos);
  CHECK(load_catalog_text(wrong_level, Validation::None).size() == 1);

  const std::string wrong_det = R"([{"name": "A2", "level": 3, "gram": [[2, -1], [-1, 2]], "note": "", "det": "4"}])";
  const auto checks = check_catalog(parse_catalog(wrong_det), Validation::Basic);
  REQUIRE(checks.size() == 1);
  CHECK_FALSE(checks[0].ok());
  CHECK(checks[0].problems[0].find("det") != std::string::npos);

  const std::string wrong_min = R"([{"name": "A2", "level": 3, "gram": [[2, -1], [-1, 2]], "note": "", "min": 4}])";
  CHECK(check_catalog(parse_catalog(wrong_min), Validation::Basic)[0].ok());
  CHECK_FALSE(check_catalog(parse_catalog(wrong_min), Validation::Full)[0].ok());

  // E8 + A2: level 3 is right, but det 3 is not 3^5
  const std::string not_modular = R"([{"name": "mix", "level": 3, "note": "",
    "gram": [[2,0,-1,0,0,0,0,0,0,0],[0,2,0,-1,0,0,0,0,0,0],[-1,0,2,-1,0,0,0,0,0,0],[0,-1,-1,2,-1,0,0,0,0,0],
             [0,0,0,-1,2,-1,0,0,0,0],[0,0,0,0,-1,2,-1,0,0,0],[0,0,0,0,0,-1,2,-1,0,0],[0,0,0,0,0,0,-1,2,0,0],
             [0,0,0,0,0,0,0,0,2,-1],[0,0,0,0,0,0,0,0,-1,2]]}])";
  CHECK(check_catalog(parse_catalog(not_modular), Validation::Basic)[0].ok());
  const auto nm = check_catalog(parse_catalog(not_modular), Validation::Full);
  CHECK_FALSE(nm[0].ok());
}

TEST_CASE("lookup") {
  CHECK(find_entry("Leech").gram.rows() == 24);
  const std::string msg = message_of([] { find_entry("E9"); });
  CHECK(msg.find("E9") != std::string::npos);
  CHECK(msg.find("Leech") != std::string::npos);
  CHECK(kind_of([] { find_entry("E9"); }) == ErrorKind::Catalog);
  CHECK(base_lattice_name(1) == "E8");
  CHECK(base_lattice_name(2) == "D4");
  CHECK(base_lattice_name(3) == "A2");
  CHECK(base_lattice_name(23) == "Base23");
  CHECK(kind_of([] { base_lattice_name(4); }) == ErrorKind::LevelNotAdmissible);
}

TEST_CASE("loading from a file and replacing the active catalogue") {
  const std::string path = "catalog_test_tmp.json";
  {
    std::ofstream out(path);
    out << kSmall;
  }
  auto entries = load_catalog(path);
  CHECK(entries.size() == 2);
  std::remove(path.c_str());
  CHECK(kind_of([&] { load_catalog(path); }) == ErrorKind::Catalog);

  set_active_catalog(entries);
  CHECK(find_entry("Z2").gram.rows() == 2);
  CHECK(kind_of([] { find_entry("E8"); }) == ErrorKind::Catalog);
  set_active_catalog(load_catalog_text(builtin_catalog_text(), Validation::None));
  CHECK(find_entry("E8").gram.rows() == 8);
}
