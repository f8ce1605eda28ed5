#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "modlat/catalog.hpp"
#include "modlat/enumeration.hpp"
#include "modlat/level_data.hpp"
#include "modlat/modular.hpp"
#include "modlat/qseries.hpp"

using namespace modlat;

namespace {

Lattice cat(const char* name) { return find_entry(name).lattice(); }

// sum over |x| <= r of exp(-pi t x G x^T), brute force over a box
double direct_theta(const RatMatrix& g, double t, long r) {
  const std::size_t n = g.rows();
  std::vector<long> x(n, -r);
  double total = 0;
  for (;;) {
    double s = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) s += g(a, b).get_d() * x[a] * x[b];
    total += std::exp(-M_PI * t * s);
    std::size_t i = 0;
    while (i < n && x[i] == r) x[i++] = -r;
    if (i == n) break;
    ++x[i];
  }
  return total;
}

}  // namespace

TEST_CASE("level data table") {
  const std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> table = {
      {1, {24, 8}}, {2, {16, 4}}, {3, {12, 2}}, {5, {8, 4}},  {6, {8, 4}},
      {7, {6, 2}},  {11, {4, 2}}, {14, {4, 4}}, {15, {4, 4}}, {23, {2, 2}}};
  for (std::int64_t n : kAdmissibleLevels) {
    const LevelData d = level_data(n);
    CHECK(2 * d.kN == table.at(n).first);
    CHECK(2 * d.dN == table.at(n).second);
  }
  for (std::int64_t n = 1; n <= 60; ++n)
    CHECK(is_admissible_level(n) == (table.count(n) == 1));
  CHECK_THROWS_AS(level_data(4), Error);
}

TEST_CASE("theta base is the base lattice theta") {
  for (std::int64_t n : kAdmissibleLevels) {
    const QSeries tb = theta_base(n, 10);
    CHECK(tb.coeff_q(0) == 1);
    CHECK(tb == theta_series(find_entry(base_lattice_name(n)).lattice(), 10));
  }
  CHECK(theta_base(1, 8) == theta_series(cat("E8"), 8));
}

TEST_CASE("modform basis is unitriangular") {
  for (std::int64_t n : kAdmissibleLevels) {
    const LevelData d = level_data(n);
    for (std::int64_t k = 0; k <= 3 * d.kN; k += d.dN) {
      const auto basis = modform_basis(n, k, 2 * (k / d.kN) + 6);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(basis[i].delta_power == static_cast<std::int64_t>(i));
        CHECK(d.kN * basis[i].delta_power + d.dN * basis[i].theta_power == k);
        const auto& s = basis[i].series;
        for (QSeries::Exponent j = 0; j < 2 * static_cast<QSeries::Exponent>(i); ++j) CHECK(s.coeff_q(j) == 0);
        CHECK(s.coeff_q(2 * static_cast<QSeries::Exponent>(i)) == 1);
      }
    }
  }
}

TEST_CASE("extremal forms") {
  const auto f = extremal_form(1, 12, 6);
  CHECK(f.l == 1);
  CHECK(f.series.to_string() == "1 + 196560*q^4 + O(q^6)");
  REQUIRE(f.coefficients.size() == 2);
  CHECK(f.coefficients[0] == 1);
  CHECK(f.coefficients[1] == -720);
  CHECK(extremal_form(1, 4, 10).series == theta_series(cat("E8"), 10));
  CHECK(extremal_form(2, 8, 8).series == theta_series(cat("BW16"), 8));
  CHECK(extremal_form(3, 6, 8).series == theta_series(cat("K12"), 8));
  CHECK(extremal_form(1, 12, 6).series == theta_series(cat("Leech"), 6));
  CHECK_THROWS_AS(extremal_form(4, 4, 6), Error);
}

TEST_CASE("extremal min bound") {
  CHECK(extremal_min_bound(1, 4) == 2);
  CHECK(extremal_min_bound(1, 12) == 4);
  CHECK(extremal_min_bound(1, 24) == 6);
  CHECK(extremal_min_bound(2, 2) == 2);
  CHECK(extremal_min_bound(2, 8) == 4);
  CHECK(extremal_min_bound(3, 6) == 4);
  CHECK(extremal_min_bound(3, 1) == 2);
  CHECK(extremal_min_bound(23, 1) == 4);
}

TEST_CASE("eta products") {
  CHECK(dedekind_eta(1, 12 * 4).to_string() == "q^(1/12) - q^(25/12) + O(q^4)");
  for (std::int64_t n : kAdmissibleLevels) {
    const QSeries d = delta_N(n, 12 * 8);
    CHECK(d.coeff_q(0) == 0);
    CHECK(d.coeff_q(1) == 0);
    CHECK(d.coeff_q(2) == 1);
  }
  // Ramanujan tau in q^2 units
  const QSeries d1 = delta_N(1, 12 * 10);
  CHECK(d1.coeff_q(4) == -24);
  CHECK(d1.coeff_q(6) == 252);
  CHECK(d1.coeff_q(8) == -1472);
}

TEST_CASE("even nonnegative coefficients of small extremal forms") {
  for (std::int64_t k = 4; k <= 48; k += 4) {
    const auto f = extremal_form(1, k, 12);
    for (QSeries::Exponent j = 0; j < 12; ++j) {
      const Rat c = f.series.coeff_q(j);
      CHECK(c.get_den() == 1);
      CHECK(c >= 0);
      if (j > 0) CHECK(c.get_num() % 2 == 0);
    }
  }
}

TEST_CASE("check_modular") {
  ModularCheckOptions o;
  o.precision = 10;
  const auto d4 = check_modular(cat("D4"), o);
  CHECK(d4.level == 2);
  CHECK(d4.strongly_modular());
  for (const auto& v : d4.divisors) CHECK(v.status == ModularStatus::ExactPass);

  const auto k12 = check_modular(cat("K12"), o);
  CHECK(k12.strongly_modular());

  ModularCheckOptions small = o;
  small.precision = 5;
  const auto leech = check_modular(find_entry("Leech").lattice(), small);
  REQUIRE(leech.divisors.size() == 1);
  CHECK(leech.divisors[0].status == ModularStatus::ExactPass);
  CHECK(congruent(to_rational(*leech.divisors[0].isometry),
                  rescale(partial_dual(cat("Leech"), 1), 1).gram()) == cat("Leech").gram());

  const auto mixed = check_modular(direct_sum(cat("E8"), cat("A2")), o);
  CHECK_FALSE(mixed.formally_strongly_modular());
  bool failed = false;
  for (const auto& v : mixed.divisors) failed = failed || v.status == ModularStatus::Fail;
  CHECK(failed);

  ModularCheckOptions formal = o;
  formal.isometry = false;
  for (std::int64_t n : {2, 3, 5, 6}) {
    const auto c = check_modular(c_n_lattice(n), formal);
    CHECK(c.formally_strongly_modular());
    for (const auto& v : c.divisors)
      CHECK(v.status == (v.m == 1 ? ModularStatus::ExactPass : ModularStatus::FormalPass));
  }
}

TEST_CASE("isometry search") {
  const Lattice a2 = cat("A2");
  const Lattice other(RatMatrix{{2, 1}, {1, 2}});
  const auto found = find_isometry(a2, other, 1000);
  REQUIRE(found.images.has_value());
  CHECK(congruent(to_rational(*found.images), other.gram()) == a2.gram());
  CHECK_FALSE(find_isometry(a2, Lattice(RatMatrix{{2, 0}, {0, 2}}), 1000).images.has_value());
}

TEST_CASE("check_extremal") {
  ModularCheckOptions o;
  o.precision = 10;
  CHECK(check_extremal(cat("E8"), o).passed());
  CHECK(check_extremal(cat("D4"), o).passed());
  CHECK(check_extremal(cat("K12"), o).passed());
  CHECK(check_extremal(cat("A2"), o).passed());
  // weight 8 has a one-dimensional space, so E8 + E8 is extremal
  CHECK(check_extremal(direct_sum(cat("E8"), cat("E8")), o).passed());
  const auto k12x2 = check_extremal(rescale(cat("K12"), 2), o);
  CHECK_FALSE(k12x2.passed());
  const auto odd = check_extremal_odd(cat("D12+"), 1, o);
  CHECK(odd.passed());
}

TEST_CASE("transformation formula") {
  const Lattice a2 = cat("A2");
  const auto r = transformation_check(a2, Rat(2));
  CHECK(r.passed());
  // independent direct summation of both sides
  const double lhs = direct_theta(dual(a2).gram(), 2.0, 12);
  const double rhs = std::pow(2.0, -1.0) * std::sqrt(3.0) * direct_theta(a2.gram(), 0.5, 12);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(std::fabs(r.details.at("lhs").get<double>() - lhs) <= 1e-9);

  const Lattice z1 = standard_lattice(1);
  const auto rz = transformation_check(z1, Rat(1));
  CHECK(rz.passed());
  CHECK(std::fabs(rz.details.at("lhs").get<double>() - direct_theta(z1.gram(), 1.0, 40)) <= 1e-9);
  CHECK(std::fabs(rz.details.at("lhs").get<double>() - rz.details.at("rhs").get<double>()) <= 1e-9);

  // a lattice that is not its own rescaled dual still satisfies the Poisson identity
  CHECK(transformation_check(Lattice(RatMatrix{{1, 0}, {0, 3}}), Rat(3, 2)).passed());
}
