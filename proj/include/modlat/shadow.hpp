#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modlat/enumeration.hpp"
#include "modlat/lattice.hpp"
#include "modlat/qseries.hpp"

namespace modlat {

/// S(L) = shift + L*. `base` is L* with the dual basis (Gram G^{-1});
/// `shift` is in dual-basis coordinates, `lattice_shift` the same vector in
/// coordinates of the basis of L. Zero shift for even L.
struct ShadowCoset {
  Lattice base;
  std::vector<Rat> shift;
  std::vector<Rat> lattice_shift;
};

/// Half of a characteristic vector: s = G^{-1} diag(G) / 2, i.e. (2s, b_i) = (b_i, b_i).
ShadowCoset shadow_coset(const Lattice& lattice);

/// True iff (2 s, x) = (x, x) mod 2 on the basis of L.
bool is_characteristic_half(const Lattice& lattice, const std::vector<Rat>& lattice_shift);

/// Theta series of s + L* for norms <= bound, in units of q^(1/den) where den
/// is 12 times a common denominator of the shadow norms.
QSeries shadow_theta(const Lattice& lattice, const Rat& bound, const EnumerationOptions& options = {});

struct ShadowReport {
  std::int64_t level = 1;
  std::size_t dim = 0;
  std::int64_t l = 0;  // dim / sigma_0(N)
  Rat min0;
  std::uint64_t count = 0;
  Rat m;  // (l sigma_1 - 4 N min0) / 8
  bool m_admissible = false;  // m a nonnegative integer
  Rat predicted;  // (l sigma_1 - 8 m) / (4 N) when m_admissible
};

/// Shadow minimum and the parameter m for an odd lattice of odd admissible level N.
ShadowReport shadow_min(const Lattice& lattice, std::int64_t level = 1, const EnumerationOptions& options = {});

/// (l sigma_1(N) - 8 m) / (4 N).
Rat shadow_min_formula(std::int64_t level, std::int64_t l, std::int64_t m);

/// Upper bound for the minimum of an odd strongly N-modular lattice of the
/// given dimension: 2 floor(dim / (2 k_N)) + 2, or 3 when dim = 2 k_N - sigma_0(N).
std::int64_t odd_min_bound(std::int64_t level, std::int64_t dim);

}  // namespace modlat
