#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "modlat/enumeration.hpp"
#include "modlat/lattice.hpp"
#include "modlat/qseries.hpp"
#include "modlat/report.hpp"

namespace modlat {

/// |X| m^k (1 3 ... (2k-1)) / (n (n+2) ... (n+2k-2)): the constant c with
/// sum_x (alpha, x)^(2k) = c (alpha, alpha)^k for a design X of norm m.
Rat design_constant(std::int64_t n, std::int64_t k, const Int& count, const Rat& m);

enum class DesignStrategy { MomentTensor, RandomWitness };

struct DesignTestConfig {
  std::vector<int> degrees = {2, 4, 6};  // even 2k
  std::size_t witnesses = 100;
  std::uint64_t seed = 1;
  /// Per degree; by default moment tensors for 2k <= 6 and witnesses above.
  std::map<int, DesignStrategy> strategy;
  std::size_t tensor_cap = 5'000'000;  // symmetric tensor components

  DesignStrategy strategy_for(int degree) const;
};

/// Distinct nonzero directions uniform in {-9..9}^n from a seeded generator.
std::vector<std::vector<std::int64_t>> witness_directions(std::size_t n, std::size_t count, std::uint64_t seed);

/// Exact check of sum_x (alpha, x)^(2k) = c (alpha, alpha)^k for every
/// degree in the config, by moment tensor or witnesses.
CertReport design_test(const Lattice& lattice, const VectorLayer& layer, const DesignTestConfig& config);

/// Witness directions only.
CertReport power_sum_design_test(const Lattice& lattice, const VectorLayer& layer, const std::vector<int>& degrees,
                                 std::size_t witnesses, std::uint64_t seed);

/// Full symmetric moment tensor of degree 2k <= 6 compared with the
/// symmetrised metric power; a pass proves the identity for all alpha.
CertReport moment_tensor_test(const Lattice& lattice, const VectorLayer& layer, int degree,
                              std::size_t tensor_cap = 5'000'000);

/// Min(L) is a spherical 4-design (moment tensors of degree 2 and 4).
CertReport is_strongly_perfect(const Lattice& lattice, const EnumerationOptions& options = {});

/// Rank of span{x x^T : x in layer} in the symmetric matrices.
std::size_t perfection_rank(const VectorLayer& layer);
std::size_t perfection_rank(const Lattice& lattice, const EnumerationOptions& options = {});

enum class EutaxyKind { StronglyEutactic, EutacticWithCertificate, NoCertificateFound, Disproved };
const char* to_string(EutaxyKind k) noexcept;

struct EutaxyReport {
  EutaxyKind kind = EutaxyKind::NoCertificateFound;
  std::optional<Rat> lambda;  // common coefficient in the strongly eutactic case
  CertReport report;
};

EutaxyReport eutaxy_check(const Lattice& lattice, const EnumerationOptions& options = {});

/// (n + 2) / 3.
Rat min_product_threshold(std::int64_t n);
/// Smallest even m with m^2 >= (n+2)/3: the bound for a strongly perfect
/// even unimodular lattice of dimension n.
std::int64_t unimodular_min_bound(std::int64_t n);
CertReport min_product_check(const Lattice& lattice, const EnumerationOptions& options = {});

/// h = |L_2| / n and sum_{x in L_2} (x, alpha)^2 = 2 h (alpha, alpha) on witnesses.
CertReport coxeter_identity_check(const Lattice& lattice, std::size_t witnesses = 20, std::uint64_t seed = 1,
                                  const EnumerationOptions& options = {});

/// Design strength of all layers of extremal lattices of level N and weight k.
std::optional<int> predicted_design_strength(std::int64_t level, std::int64_t weight);

/// Zonal harmonic of degree t in dimension n for the direction alpha:
/// P(x) = sum_j c_j s^(t-2j) (r a)^j with s = (x, alpha), r = (x, x),
/// a = (alpha, alpha), integer c_j.
class ZonalHarmonic {
 public:
  ZonalHarmonic(std::size_t n, int t, std::vector<std::int64_t> alpha);

  std::size_t dim() const noexcept { return n_; }
  int degree() const noexcept { return t_; }
  const std::vector<std::int64_t>& alpha() const noexcept { return alpha_; }
  /// c_j for j = 0..floor(t/2).
  const std::vector<Int>& coefficients() const noexcept { return coeffs_; }

  Rat evaluate(const Rat& s, const Rat& r, const Rat& a) const;

 private:
  std::size_t n_;
  int t_;
  std::vector<std::int64_t> alpha_;
  std::vector<Int> coeffs_;
};

ZonalHarmonic zonal_harmonic(std::size_t n, int t, std::vector<std::int64_t> alpha);

/// Per norm r <= bound: sum over the layer of (x, alpha)^p for p = 0..max_power.
std::map<Rat, std::vector<Rat>> layer_power_sums(const Lattice& lattice, const std::vector<std::int64_t>& alpha,
                                                 int max_power, const Rat& bound,
                                                 const EnumerationOptions& options = {});

/// sum_{(x,x) <= bound} P(x) q^(x,x); units as in theta_window.
QSeries harmonic_theta_truncation(const Lattice& lattice, const ZonalHarmonic& p, const Rat& bound,
                                  const EnumerationOptions& options = {});

}  // namespace modlat
