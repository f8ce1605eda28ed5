#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "modlat/matrix.hpp"

namespace modlat {

/// A lattice given by its Gram matrix with respect to some basis. The Gram
/// matrix is positive definite and symmetric; determinant, integrality and
/// parity are computed once at construction.
class Lattice {
 public:
  /// Validates and caches invariants; see validate_lattice().
  explicit Lattice(RatMatrix gram);

  const RatMatrix& gram() const noexcept { return gram_; }
  std::size_t dim() const noexcept { return gram_.rows(); }
  const Rat& det() const noexcept { return det_; }
  bool integral() const noexcept { return integral_; }
  bool even() const noexcept { return even_; }
  bool odd() const noexcept { return integral_ && !even_; }

  /// Inner product of two coordinate rows.
  Rat inner(std::span<const Rat> x, std::span<const Rat> y) const;

  bool operator==(const Lattice& o) const { return gram_ == o.gram_; }

 private:
  RatMatrix gram_;
  Rat det_;
  bool integral_ = false;
  bool even_ = false;
};

Lattice validate_lattice(RatMatrix gram);
Lattice lattice_from_ints(const IntMatrix& gram);

/// Gram matrix of L*, the inverse Gram matrix (w.r.t. the dual basis).
Lattice dual(const Lattice& lattice);
Lattice rescale(const Lattice& lattice, const Rat& c);

/// (1/m) L intersected with L*, for an exact divisor m of the level.
/// Computed as the dual of m L* + L, whose basis comes from an HNF.
Lattice partial_dual(const Lattice& lattice, std::int64_t m);

/// Basis (rows, coordinates in the basis of `lattice`) of (1/m)L ∩ L*.
RatMatrix partial_dual_basis(const Lattice& lattice, std::int64_t m);

/// Kernel of x -> (x,x) mod 2, an index-2 sublattice of an odd lattice.
Lattice even_sublattice(const Lattice& lattice);
/// Basis rows of the even sublattice in coordinates of `lattice`.
IntMatrix even_sublattice_basis(const Lattice& lattice);

/// Smallest N with sqrt(N) L* even. Requires an even lattice.
std::int64_t level(const Lattice& lattice);

/// Smallest N with N G^{-1} integral (and even diagonal when L is even).
/// For even lattices this is level(); for odd lattices it is the N used for
/// modularity statements.
std::int64_t modular_level(const Lattice& lattice);

/// Index [M : L] = sqrt(det L / det M) for a superlattice M of L; exact.
Int superlattice_index(const Lattice& sub, const Lattice& super);

Lattice direct_sum(const Lattice& a, const Lattice& b);

/// perp_{d | N} sqrt(d) Z, for admissible N.
Lattice c_n_lattice(std::int64_t level);

/// Z^n.
Lattice standard_lattice(std::size_t n);

/// Density of the sphere packing for a lattice of the given minimum.
struct DensityReport {
  Rat min;
  Rat det;
  std::size_t n = 0;
  /// (delta(L) / delta(Z^n))^2 = min^n / det, always exact.
  Rat ratio_squared;
  /// delta(L) / delta(Z^n) when min^n/det is a rational square.
  std::optional<Rat> ratio;
  /// V_n / 2^n sqrt(min^n / det), V_n the volume of the unit ball.
  double delta = 0.0;
  double log10_ratio = 0.0;
};

DensityReport density(const Lattice& lattice, const Rat& min);
DensityReport density(std::size_t n, const Rat& min, const Rat& det);

/// Exact square root of a nonnegative rational when it exists.
std::optional<Rat> rational_sqrt(const Rat& x);

}  // namespace modlat
