#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modlat/enumeration.hpp"
#include "modlat/lattice.hpp"
#include "modlat/qseries.hpp"
#include "modlat/report.hpp"

namespace modlat {

enum class ModularStatus { FormalPass, ExactPass, Fail, Inconclusive };
const char* to_string(ModularStatus s) noexcept;

struct DivisorVerdict {
  std::int64_t m = 1;
  ModularStatus status = ModularStatus::Inconclusive;
  bool formal = false;  // theta series agree on the window
  std::optional<QSeries::Exponent> first_difference;  // exponent in q
  std::string reason;
  std::uint64_t nodes = 0;  // isometry search nodes used
  std::optional<IntMatrix> isometry;  // rows: images of the basis of L in the rescaled partial dual
};

struct ModularityVerdict {
  std::int64_t level = 1;
  QSeries::Exponent window = 0;  // theta series compared below q^window
  std::vector<DivisorVerdict> divisors;

  bool formally_strongly_modular() const;
  /// Formal pass for m = N.
  bool formally_modular() const;
  bool strongly_modular() const;  // every divisor an exact pass
};

struct ModularCheckOptions {
  QSeries::Exponent precision = 20;  // requested window in q
  std::uint64_t vector_budget = 20'000'000;  // window shrinks to keep enumeration below this
  bool isometry = true;
  std::uint64_t isometry_budget = 1'000'000;
  std::size_t isometry_dim_cap = 16;
  EnumerationOptions enumeration;
};

/// Compares L with every rescaled partial dual sqrt(m) L^{*,m}, m an exact
/// divisor of modular_level(L): theta series on a window, then optionally an
/// explicit isometry search.
ModularityVerdict check_modular(const Lattice& lattice, const ModularCheckOptions& options = {});

/// Largest window (in q, at most `requested`) whose enumeration is expected
/// to stay below `budget` vectors.
QSeries::Exponent affordable_window(const Lattice& lattice, QSeries::Exponent requested, std::uint64_t budget);

/// Searches for an isometry from `from` onto `to` (same dimension and
/// determinant). Returns the image rows, nullopt if none exists, and sets
/// `exhausted` when the node budget ran out first.
struct IsometrySearch {
  std::optional<IntMatrix> images;
  bool exhausted = false;
  std::uint64_t nodes = 0;
};
IsometrySearch find_isometry(const Lattice& from, const Lattice& to, std::uint64_t budget,
                             const EnumerationOptions& options = {});

/// theta series of the catalogue base lattice of level N, below q^precision.
QSeries theta_base(std::int64_t level, QSeries::Exponent precision);

struct BasisElement {
  std::int64_t delta_power = 0;  // i
  std::int64_t theta_power = 0;  // j
  QSeries series;
};

/// Delta_N^i theta_N^j with k_N i + d_N j = k, ordered by i; empty if k is not representable.
std::vector<BasisElement> modform_basis(std::int64_t level, std::int64_t weight, QSeries::Exponent precision);

struct ExtremalForm {
  std::int64_t level = 1;
  std::int64_t weight = 0;
  QSeries::Exponent precision = 0;  // in q
  std::int64_t l = 0;  // floor(k / k_N)
  QSeries series;
  std::vector<Rat> coefficients;  // over modform_basis, by i
};

/// The unique element 1 + O(q^(2l+2)) of the weight-k space; requires precision > 2l + 2.
ExtremalForm extremal_form(std::int64_t level, std::int64_t weight, QSeries::Exponent precision);

/// 2 + 2 floor(k / k_N).
std::int64_t extremal_min_bound(std::int64_t level, std::int64_t weight);

/// Even strongly N-modular lattice with det N^(n/2): pass iff the minimum
/// equals the extremal bound and the theta series is the extremal form.
CertReport check_extremal(const Lattice& lattice, const ModularCheckOptions& options = {});

/// Odd variant: minimum against the odd bound (3 in the exceptional dimension).
CertReport check_extremal_odd(const Lattice& lattice, std::int64_t level, const ModularCheckOptions& options = {});

/// Numeric check of theta_{L*}(it) = t^(-n/2) sqrt(det L) theta_L(i/t) with
/// rigorous tail bounds.
CertReport transformation_check(const Lattice& lattice, const Rat& t, double tolerance = 1e-9,
                                const EnumerationOptions& options = {});

}  // namespace modlat
