// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "modlat/catalog.hpp"
#include "modlat/designs.hpp"
#include "modlat/enumeration.hpp"
#include "modlat/level_data.hpp"
#include "modlat/modular.hpp"
#include "modlat/qseries.hpp"
#include "modlat/shadow.hpp"
#include "oracles.hpp"

using namespace modlat;

namespace {

constexpr double kTransformTolerance = 1e-9;
constexpr std::size_t kLeechWitnesses = 100;
constexpr std::uint64_t kLeechSeed = 1;
constexpr QSeries::Exponent kScanWindow = 21;  // q^0 .. q^20
constexpr std::int64_t kScanMaxWeight = 100;

Lattice cat(const char* name) { return find_entry(name).lattice(); }

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << "failed: ";
      else note << "; ";
      note << what;
      ok = false;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.ok) ++failures;
  std::cout << "criterion " << std::setw(2) << id << ": " << (o.ok ? "PASS" : "FAIL") << "  " << title << " ("
            << std::fixed << std::setprecision(2) << secs << " s)";
  const std::string n = o.note.str();
  if (!n.empty()) std::cout << " - " << n;
  std::cout << std::endl;
}

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

int main() {
  criterion(1, "extremal form f_{1,12} has q^4 coefficient 196560", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto f = extremal_form(1, 12, 6);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.expect(f.series.coeff_q(0) == 1, "constant term");
    o.expect(f.series.coeff_q(2) == 0, "q^2 term");
    o.expect(f.series.coeff_q(4) == 196560, "q^4 coefficient " + f.series.coeff_q(4).get_str());
    o.expect(secs < 1.0, "runtime above 1 s");
    o.note << f.series.to_string();
  });

  criterion(2, "Leech lattice: min 4, a(4) = 196560, check-extremal passes", [](Outcome& o) {
    const Lattice leech = cat("Leech");
    const auto m = minimum(leech);
    o.expect(m.min == 4, "minimum " + m.min.get_str());
    o.expect(m.count == 196560, "kissing number " + std::to_string(m.count));
    o.expect(Rat(static_cast<long>(m.count)) == extremal_form(1, 12, 6).series.coeff_q(4),
             "kissing number differs from the extremal form");
    const auto r = check_extremal(leech);
    o.expect(r.passed(), "check_extremal: " + r.summary);
    o.note << r.summary;
  });

  criterion(3, "minima of extremal catalogue lattices equal 2 + 2 floor(k/k_N)", [](Outcome& o) {
    const std::vector<std::pair<const char*, std::int64_t>> table = {{"E8", 2},  {"D4", 2},   {"A2", 2},
                                                                     {"K12", 4}, {"BW16", 4}, {"Leech", 4}};
    for (const auto& [name, expected] : table) {
      const auto& e = find_entry(name);
      const Lattice l = e.lattice();
      const auto bound = extremal_min_bound(e.level, static_cast<std::int64_t>(l.dim() / 2));
      const Rat m = minimum(l).min;
      o.expect(bound == expected, std::string(name) + " bound " + std::to_string(bound));
      o.expect(m == expected, std::string(name) + " min " + m.get_str());
    }
  });

  criterion(4, "level data (2k_N, 2d_N) for the ten admissible levels", [](Outcome& o) {
    const std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> table = {
        {1, {24, 8}}, {2, {16, 4}}, {3, {12, 2}}, {5, {8, 4}},  {6, {8, 4}},
        {7, {6, 2}},  {11, {4, 2}}, {14, {4, 4}}, {15, {4, 4}}, {23, {2, 2}}};
    o.expect(kAdmissibleLevels.size() == table.size(), "number of admissible levels");
    for (std::int64_t n : kAdmissibleLevels) {
      const auto d = level_data(n);
      o.expect(2 * d.kN == table.at(n).first && 2 * d.dN == table.at(n).second, "level " + std::to_string(n));
    }
  });

  criterion(5, "design strengths of E8 roots and Leech minimal vectors", [](Outcome& o) {
    const Lattice e8 = cat("E8");
    const auto roots = minimal_vectors(e8);
    for (int d : {2, 4, 6}) o.expect(moment_tensor_test(e8, roots, d).passed(), "E8 tensor degree " + std::to_string(d));
    const auto e8w = power_sum_design_test(e8, roots, {8}, kLeechWitnesses, kLeechSeed);
    o.expect(e8w.verdict == Verdict::Fail, "E8 degree 8 did not fail");
    const Lattice leech = cat("Leech");
    const auto minv = minimal_vectors(leech);
    for (int d : {2, 4, 6})
      o.expect(moment_tensor_test(leech, minv, d).passed(), "Leech tensor degree " + std::to_string(d));
    const auto lw = power_sum_design_test(leech, minv, {8, 10}, kLeechWitnesses, kLeechSeed);
    o.expect(lw.passed(), "Leech witnesses degrees 8, 10");
    o.note << "witnesses " << kLeechWitnesses << ", seed " << kLeechSeed;
  });

  criterion(6, "strong perfection of E8, A2, D4, K12, BW16; Z^3 fails", [](Outcome& o) {
    for (const char* name : {"E8", "A2", "D4", "K12", "BW16"})
      o.expect(is_strongly_perfect(cat(name)).passed(), name);
    o.expect(is_strongly_perfect(standard_lattice(3)).verdict == Verdict::Fail, "Z^3 did not fail");
  });

  criterion(7, "perfection rank of E8 is 36, strongly eutactic with lambda 1/60", [](Outcome& o) {
    const Lattice e8 = cat("E8");
    o.expect(perfection_rank(e8) == 36, "rank " + std::to_string(perfection_rank(e8)));
    const auto eu = eutaxy_check(e8);
    o.expect(eu.kind == EutaxyKind::StronglyEutactic, std::string("kind ") + to_string(eu.kind));
    o.expect(eu.lambda && *eu.lambda == Rat(1) / 60, "lambda");
  });

  criterion(8, "min(L) min(L*) >= (n+2)/3 for strongly perfect catalogue lattices; n = 248 gives 10", [](Outcome& o) {
    std::size_t checked = 0;
    for (const auto& e : active_catalog()) {
      const Lattice l = e.lattice();
      if (!is_strongly_perfect(l).passed()) continue;
      ++checked;
      const auto r = min_product_check(l);
      o.expect(r.passed(), e.name + ": " + r.summary);
    }
    o.expect(unimodular_min_bound(248) == 10, "n = 248 bound " + std::to_string(unimodular_min_bound(248)));
    o.note << checked << " strongly perfect lattices";
  });

  criterion(9, "shadow of Z^n: min n/4 with 2^n vectors, m = 0", [](Outcome& o) {
    for (std::size_t n : {4, 8, 12, 16}) {
      const auto r = shadow_min(standard_lattice(n));
      const std::string tag = "n = " + std::to_string(n);
      o.expect(r.min0 == Rat(static_cast<long>(n)) / 4, tag + " min " + r.min0.get_str());
      o.expect(r.count == (std::uint64_t{1} << n), tag + " count");
      o.expect(r.m == 0 && r.m_admissible, tag + " m");
    }
  });

  criterion(10, "transformation formula for A2 at t = 2 and Z at t = 1", [](Outcome& o) {
    const Lattice a2 = cat("A2");
    const auto r = transformation_check(a2, Rat(2), kTransformTolerance);
    o.expect(r.passed(), "A2: " + r.summary);
    const double lhs = direct_theta(dual(a2).gram(), 2.0, 12);
    const double rhs = 0.5 * std::sqrt(3.0) * direct_theta(a2.gram(), 0.5, 12);
    o.expect(std::fabs(lhs - rhs) <= kTransformTolerance, "A2 direct summation");
    o.expect(std::fabs(r.details.at("lhs").get<double>() - lhs) <= kTransformTolerance, "A2 lhs vs direct sum");
    const Lattice z = standard_lattice(1);
    const auto rz = transformation_check(z, Rat(1), kTransformTolerance);
    o.expect(rz.passed(), "Z: " + rz.summary);
    o.expect(std::fabs(rz.details.at("lhs").get<double>() - direct_theta(z.gram(), 1.0, 40)) <= kTransformTolerance,
             "Z lhs vs direct sum");
  });

  criterion(11, "density ratios 2^24 for Leech and 8^40 for (80, 8, 1)", [](Outcome& o) {
    const auto leech = density(cat("Leech"), Rat(4));
    o.expect(leech.ratio && *leech.ratio == Rat(Int(1) << 24), "Leech ratio");
    const auto big = density(80, Rat(8), Rat(1));
    Int p8, p10;
    mpz_ui_pow_ui(p8.get_mpz_t(), 8, 40);
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, 36);
    o.expect(big.ratio && *big.ratio == Rat(p8), "8^40");
    o.expect(big.ratio && *big.ratio > Rat(p10), "exceeds 10^36");
  });

  criterion(12, "f_{1,k} for k <= 100 has even nonnegative integer coefficients on q^0..q^20", [](Outcome& o) {
    std::size_t forms = 0;
    for (std::int64_t k = 4; k <= kScanMaxWeight; k += 4) {
      const auto f = extremal_form(1, k, kScanWindow);
      ++forms;
      for (QSeries::Exponent j = 0; j < kScanWindow; ++j) {
        const Rat c = f.series.coeff_q(j);
        const std::string tag = "k = " + std::to_string(k) + ", q^" + std::to_string(j);
        o.expect(c.get_den() == 1, tag + " not integral");
        o.expect(c >= 0, tag + " negative");
        if (j > 0) o.expect(c.get_num() % 2 == 0, tag + " odd");
      }
    }
    o.note << forms << " forms (weights 4..100 divisible by 4; other even weights have no level 1 forms)";
  });

  criterion(13, "property suites", [](Outcome& o) {
    // parallel determinism
    const Lattice k12 = cat("K12");
    EnumerationOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const auto a = enumerate(k12, Rat(6), std::nullopt, true, one);
    const auto b = enumerate(k12, Rat(6), std::nullopt, true, many);
    bool same = a.theta == b.theta && a.layers.size() == b.layers.size();
    for (std::size_t i = 0; same && i < a.layers.size(); ++i) same = a.layers[i].vectors == b.layers[i].vectors;
    o.expect(same, "parallel determinism");

    // box oracle
    std::mt19937_64 rng(13);
    std::size_t boxes = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 1 + trial % 6;
      const RatMatrix g = oracle::random_gram(rng, n);
      const Rat bound(1 + trial % 12);
      const auto radius = oracle::safe_radius(g, bound);
      long cells = 1;
      for (long r : radius) cells *= 2 * r + 1;
      if (cells > 2'000'000) continue;
      ++boxes;
      o.expect(enumerate(g, bound, std::nullopt, false).theta.counts == oracle::box_counts(g, bound, radius),
               "box oracle trial " + std::to_string(trial));
    }
    o.expect(boxes >= 20, "too few box trials");

    // partial-dual index
    const Lattice d4 = cat("D4");
    o.expect(superlattice_index(d4, partial_dual(d4, 2)) == 4, "D4 index");
    const Lattice b6 = cat("Base6");
    for (std::int64_t m : {1, 2, 3, 6})
      o.expect(superlattice_index(b6, partial_dual(b6, m)) == m * m, "Base6 index for m = " + std::to_string(m));

    // cusp form leading term
    for (std::int64_t n : kAdmissibleLevels) {
      const QSeries d = delta_N(n, 12 * 6);
      o.expect(d.valuation() == 24 && d.coeff_q(2) == 1, "Delta_" + std::to_string(n) + " leading term");
    }

    // odd zonal sums
    for (const char* name : {"E8", "K12", "D12+", "Base7"}) {
      const Lattice l = cat(name);
      std::vector<std::int64_t> alpha(l.dim(), 0);
      alpha[0] = 2;
      alpha[l.dim() - 1] = -1;
      for (int t : {1, 3, 5, 7})
        o.expect(harmonic_theta_truncation(l, ZonalHarmonic(l.dim(), t, alpha), Rat(6)).is_zero(),
                 std::string(name) + " degree " + std::to_string(t));
    }
    o.note << boxes << " box trials";
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
