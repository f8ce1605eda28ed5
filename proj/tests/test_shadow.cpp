#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "modlat/catalog.hpp"
#include "modlat/enumeration.hpp"
#include "modlat/shadow.hpp"

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

bool is_int(const Rat& r) { return r.get_den() == 1; }

Rat frac(long a, long b) { return Rat(a) / b; }

}  // namespace

TEST_CASE("shadows of Z^n") {
  for (std::size_t n = 1; n <= 16; ++n) {
    const auto r = shadow_min(standard_lattice(n));
    CHECK(r.min0 == frac(static_cast<long>(n), 4));
    CHECK(r.count == (std::uint64_t{1} << n));
    CHECK(r.l == static_cast<std::int64_t>(n));
    CHECK(r.m == 0);
    CHECK(r.m_admissible);
    CHECK(r.predicted == r.min0);
  }
  const auto z8 = shadow_min(standard_lattice(8));
  CHECK(z8.min0 == 2);
  CHECK(z8.count == 256);
}

TEST_CASE("shadow coset") {
  for (const char* name : {"D12+"}) {
    const Lattice l = find_entry(name).lattice();
    const auto c = shadow_coset(l);
    CHECK(is_characteristic_half(l, c.lattice_shift));
    CHECK_FALSE(std::all_of(c.shift.begin(), c.shift.end(), is_int));
  }
  for (std::size_t n = 1; n <= 6; ++n) {
    const Lattice z = standard_lattice(n);
    const auto c = shadow_coset(z);
    for (const auto& v : c.lattice_shift) CHECK(v == Rat(1, 2));
    CHECK(is_characteristic_half(z, c.lattice_shift));
    std::vector<Rat> bad(n, Rat(0));
    CHECK_FALSE(is_characteristic_half(z, bad));
  }
  const auto even = shadow_coset(find_entry("E8").lattice());
  for (const auto& v : even.shift) CHECK(v == 0);
}

TEST_CASE("L_g* is the union of L* and the shadow") {
  const std::vector<Lattice> inputs = {standard_lattice(3), c_n_lattice(3), c_n_lattice(5), c_n_lattice(15),
                                       find_entry("D12+").lattice()};
  for (const Lattice& l : inputs) {
    const Rat bound(3);
    const auto c = shadow_coset(l);
    const auto big = enumerate(dual(even_sublattice(l)), bound, std::nullopt, false).theta.counts;
    auto both = enumerate(dual(l), bound, std::nullopt, false).theta.counts;
    const auto sh = enumerate(c.base, bound, c.shift, false).theta.counts;
    for (const auto& [norm, count] : sh) both[norm] += count;
    CHECK(both == big);
  }
}

TEST_CASE("shadow norms of unimodular lattices") {
  for (const Lattice& l : {standard_lattice(5), find_entry("D12+").lattice(), standard_lattice(11)}) {
    const auto r = shadow_min(l);
    const auto c = shadow_coset(l);
    const auto counts = enumerate(c.base, r.min0 + 4, c.shift, false).theta.counts;
    for (const auto& [norm, count] : counts) CHECK(is_int(norm - r.min0));
  }
  const auto d12 = shadow_min(find_entry("D12+").lattice());
  CHECK(d12.min0 == 1);
  CHECK(d12.m == 1);
  CHECK(d12.count == 24);
}

TEST_CASE("shadow theta") {
  CHECK(shadow_theta(standard_lattice(8), Rat(4)).to_string() == "256*q^2 + 2048*q^4 + O(q^(17/4))");
  CHECK(shadow_theta(standard_lattice(1), Rat(3)).to_string() == "2*q^(1/4) + 2*q^(9/4) + O(q^(13/4))");
}

TEST_CASE("odd levels") {
  // Z + 3Z: shadow (1/2, 1/2) + Z x (1/3)Z, minimum 1/4 + 3 (1/6)^2
  const auto c3 = shadow_min(c_n_lattice(3), 3);
  CHECK(c3.min0 == frac(1, 3));
  CHECK(c3.m == 0);
  CHECK(c3.count == 4);
  CHECK(c3.level == 3);
  CHECK(c3.l == 1);
  CHECK(c3.m == (c3.l * 4 - 4 * 3 * c3.min0) / 8);
  CHECK(kind_of([] { shadow_min(c_n_lattice(2), 2); }) == ErrorKind::Parameter);
  CHECK(kind_of([] { shadow_min(c_n_lattice(6), 6); }) == ErrorKind::Parameter);
  CHECK(kind_of([] { shadow_min(find_entry("E8").lattice()); }) == ErrorKind::EvenInput);
}

TEST_CASE("bounds and formula") {
  CHECK(odd_min_bound(1, 23) == 3);
  CHECK(odd_min_bound(1, 24) == 4);
  CHECK(odd_min_bound(1, 12) == 2);
  CHECK(odd_min_bound(1, 8) == 2);
  CHECK(odd_min_bound(3, 10) == 3);  // 2 k_3 - sigma_0(3) = 12 - 2
  CHECK(shadow_min_formula(1, 8, 0) == 2);
  CHECK(shadow_min_formula(1, 23, 0) == frac(23, 4));
  CHECK(shadow_min_formula(1, 23, 1) == frac(15, 4));
  CHECK(shadow_min_formula(3, 2, 0) == frac(8, 12));
}
