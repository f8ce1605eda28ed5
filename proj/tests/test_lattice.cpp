#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "modlat/catalog.hpp"
#include "modlat/enumeration.hpp"
#include "modlat/errors.hpp"
#include "modlat/lattice.hpp"
#include "oracles.hpp"

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

Lattice cat(const char* name) { return find_entry(name).lattice(); }

}  // namespace

TEST_CASE("validation") {
  const Lattice a2(RatMatrix{{2, 1}, {1, 2}});
  CHECK(a2.det() == 3);
  CHECK(a2.integral());
  CHECK(a2.even());
  CHECK(kind_of([] { Lattice(RatMatrix{{1, 0}, {0, -1}}); }) == ErrorKind::Definiteness);
  CHECK(kind_of([] { Lattice(RatMatrix{{2, 1}, {0, 2}}); }) == ErrorKind::Shape);
  CHECK(kind_of([] { Lattice(RatMatrix{{2, 1, 0}, {1, 2, 0}}); }) == ErrorKind::Shape);
  const Lattice half(RatMatrix{{2, Rat(1, 2)}, {Rat(1, 2), 2}});
  CHECK_FALSE(half.integral());
  CHECK_FALSE(half.even());
  CHECK(Lattice(RatMatrix{{1, 0}, {0, 3}}).odd());
}

TEST_CASE("determinant against cofactor expansion") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const RatMatrix g = oracle::random_gram(rng, n);
    CHECK(Lattice(g).det() == oracle::det_laplace(g));
  }
  for (const auto& e : active_catalog()) {
    if (e.gram.rows() > 8) continue;
    CHECK(e.lattice().det() == oracle::det_laplace(to_rational(e.gram)));
  }
}

TEST_CASE("dual") {
  const Lattice a2(RatMatrix{{2, 1}, {1, 2}});
  const Lattice d = dual(a2);
  CHECK(d.gram() == RatMatrix{{Rat(2, 3), Rat(-1, 3)}, {Rat(-1, 3), Rat(2, 3)}});
  CHECK(dual(d).gram() == a2.gram());
  for (const auto& e : active_catalog()) CHECK(dual(e.lattice()).det() * e.lattice().det() == 1);
  const Lattice e8 = cat("E8");
  CHECK(theta_window(dual(e8), Rat(6)) == theta_window(e8, Rat(6)));
}

TEST_CASE("rescale") {
  const Lattice a2(RatMatrix{{2, 1}, {1, 2}});
  CHECK(rescale(dual(a2), 3).gram() == RatMatrix{{2, -1}, {-1, 2}});
  CHECK(rescale(dual(cat("A2")), 3).gram() == RatMatrix{{2, 1}, {1, 2}});
  CHECK(rescale(a2, 1).gram() == a2.gram());
  CHECK(rescale(dual(cat("D4")), 2).det() == 4);
  CHECK(rescale(a2, Rat(1, 2)).det() == Rat(3, 4));
}

TEST_CASE("partial duals") {
  const Lattice d4 = cat("D4");
  // m = 1 gives L itself: the basis is unimodular in L coordinates
  CHECK(abs(determinant(partial_dual_basis(d4, 1))) == 1);
  CHECK(partial_dual(d4, 1).det() == d4.det());
  const Lattice full = partial_dual(d4, 2);
  CHECK(full.det() == dual(d4).det());
  CHECK(superlattice_index(d4, full) == 4);
  CHECK(superlattice_index(d4, dual(d4)) == 4);
  // (1/m)L and L* both contain it: integral pairing with L, and m times it lies in L.
  const RatMatrix b = partial_dual_basis(d4, 2);
  const RatMatrix pairing = b * d4.gram();
  CHECK(is_integral(pairing));
  CHECK(is_integral(scaled(b, 2)));

  const Lattice b6 = cat("Base6");
  for (std::int64_t m : {1, 2, 3, 6}) {
    const Lattice p = partial_dual(b6, m);
    CHECK(superlattice_index(b6, p) == m * m);
    CHECK(superlattice_index(b6, p) * superlattice_index(b6, p) * p.det() == b6.det());
  }
  CHECK(kind_of([&] { partial_dual(b6, 4); }) == ErrorKind::Divisor);
  CHECK(kind_of([&] { partial_dual(d4, 3); }) == ErrorKind::Divisor);
}

TEST_CASE("even sublattice") {
  const Lattice z2 = standard_lattice(2);
  const Lattice g = even_sublattice(z2);
  CHECK(g.det() == 4);
  CHECK(g.even());
  CHECK(theta_window(g, Rat(8)) == theta_window(Lattice(RatMatrix{{2, 0}, {0, 2}}), Rat(8)));
  for (const auto& e : active_catalog()) {
    const Lattice l = e.lattice();
    if (!l.odd()) continue;
    const Lattice lg = even_sublattice(l);
    CHECK(superlattice_index(lg, l) == 2);
    // theta of L_g keeps the even coefficients of theta_L
    const QSeries tl = theta_series(l, 7), tg = theta_series(lg, 7);
    for (QSeries::Exponent j = 0; j < 7; ++j) CHECK(tg.coeff_q(j) == (j % 2 == 0 ? tl.coeff_q(j) : Rat(0)));
  }
  for (std::size_t n = 1; n <= 5; ++n) CHECK(superlattice_index(even_sublattice(standard_lattice(n)), standard_lattice(n)) == 2);
  CHECK(kind_of([] { even_sublattice(find_entry("E8").lattice()); }) == ErrorKind::EvenInput);
}

TEST_CASE("level") {
  CHECK(level(cat("E8")) == 1);
  CHECK(level(cat("A2")) == 3);
  CHECK(level(cat("K12")) == 3);
  CHECK(level(cat("D4")) == 2);
  CHECK(level(cat("BW16")) == 2);
  // sqrt(2) Z^2: 2 G^{-1} = I has odd diagonal, so the level is 4
  CHECK(level(Lattice(RatMatrix{{2, 0}, {0, 2}})) == 4);
  CHECK(kind_of([] { level(standard_lattice(2)); }) == ErrorKind::Parity);
  CHECK(modular_level(standard_lattice(3)) == 1);
  CHECK(modular_level(c_n_lattice(6)) == 6);
  for (const auto& e : active_catalog()) CHECK(modular_level(e.lattice()) == e.level);
}

TEST_CASE("direct sums") {
  CHECK(direct_sum(standard_lattice(1), standard_lattice(1)).gram() == standard_lattice(2).gram());
  const Lattice a2 = cat("A2"), d4 = cat("D4");
  CHECK(direct_sum(a2, d4).det() == 12);
  CHECK(theta_series(direct_sum(a2, d4), 10) == theta_series(a2, 10) * theta_series(d4, 10));
  CHECK(theta_series(direct_sum(cat("E8"), a2), 8) == theta_series(cat("E8"), 8) * theta_series(a2, 8));
}

TEST_CASE("C_N") {
  CHECK(c_n_lattice(1).gram() == standard_lattice(1).gram());
  const Lattice c6 = c_n_lattice(6);
  CHECK(c6.gram() == RatMatrix{{1, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 6}});
  CHECK(c6.det() == 36);
  CHECK(c_n_lattice(23).dim() == 2);
  CHECK(c_n_lattice(23).det() == 23);
  CHECK(kind_of([] { c_n_lattice(4); }) == ErrorKind::LevelNotAdmissible);
}

TEST_CASE("density") {
  const auto leech = density(cat("Leech"), Rat(4));
  REQUIRE(leech.ratio.has_value());
  CHECK(*leech.ratio == Rat(Int(1) << 24));
  const auto big = density(80, Rat(8), Rat(1));
  REQUIRE(big.ratio.has_value());
  Int p8;
  mpz_ui_pow_ui(p8.get_mpz_t(), 8, 40);
  CHECK(*big.ratio == Rat(p8));
  Int p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, 36);
  CHECK(*big.ratio > Rat(p10));
  const auto z1 = density(standard_lattice(1), Rat(1));
  CHECK(z1.delta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(z1.ratio == Rat(1));
  // V_8 / 2^8 * sqrt(2^8) = pi^4 / 384 for E8
  CHECK(density(cat("E8"), Rat(2)).delta == doctest::Approx(std::pow(M_PI, 4) / 384).epsilon(1e-12));
  CHECK_FALSE(density(cat("A2"), Rat(2)).ratio.has_value());
}

TEST_CASE("rational square roots") {
  CHECK(rational_sqrt(Rat(9, 4)) == Rat(3, 2));
  CHECK_FALSE(rational_sqrt(Rat(3)).has_value());
  CHECK(rational_sqrt(Rat(0)) == Rat(0));
}
