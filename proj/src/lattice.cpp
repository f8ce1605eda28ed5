#include "modlat/lattice.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "modlat/errors.hpp"
#include "modlat/level_data.hpp"

namespace modlat {

namespace {

Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

std::int64_t to_int64(const Int& v, const char* what) {
  if (!v.fits_slong_p()) raise(ErrorKind::ArithmeticOverflow, std::string(what) + " does not fit in 64 bits");
  return v.get_si();
}

}  // namespace

Lattice::Lattice(RatMatrix gram) : gram_(std::move(gram)) {
  if (!gram_.square()) raise(ErrorKind::Shape, "Gram matrix is not square");
  if (!is_symmetric(gram_)) raise(ErrorKind::Shape, "Gram matrix is not symmetric");
  for (std::size_t i = 0; i < gram_.rows(); ++i)
    for (std::size_t j = 0; j < gram_.cols(); ++j) gram_(i, j).canonicalize();
  const auto minors = leading_principal_minors(gram_);
  for (std::size_t k = 0; k < minors.size(); ++k) {
    if (minors[k] <= 0)
      raise(ErrorKind::Definiteness, "leading principal minor of order " + std::to_string(k + 1) + " is " +
                                         minors[k].get_str() + " (not positive definite)");
  }
  det_ = minors.empty() ? Rat(1) : minors.back();
  integral_ = is_integral(gram_);
  even_ = integral_;
  if (integral_) {
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      if (gram_(i, i).get_num() % 2 != 0) even_ = false;
  }
}

Rat Lattice::inner(std::span<const Rat> x, std::span<const Rat> y) const {
  Rat s = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < dim(); ++j) s += x[i] * gram_(i, j) * y[j];
  }
  return s;
}

Lattice validate_lattice(RatMatrix gram) { return Lattice(std::move(gram)); }

Lattice lattice_from_ints(const IntMatrix& gram) { return Lattice(to_rational(gram)); }

Lattice dual(const Lattice& lattice) { return Lattice(inverse(lattice.gram())); }

Lattice rescale(const Lattice& lattice, const Rat& c) {
  if (c <= 0) raise(ErrorKind::Domain, "rescaling factor must be positive");
  return Lattice(scaled(lattice.gram(), c));
}

RatMatrix partial_dual_basis(const Lattice& lattice, std::int64_t m) {
  if (!lattice.integral()) raise(ErrorKind::Parity, "partial duals need an integral lattice");
  const auto n = lattice.dim();
  const auto N = modular_level(lattice);
  if (m <= 0 || N % m != 0 || std::gcd(m, N / m) != 1)
    raise(ErrorKind::Divisor, std::to_string(m) + " is not an exact divisor of the level " + std::to_string(N));
  // (A ∩ B)* = A* + B*; with A = (1/m)L and B = L*, the sum is mL* + L.
  const RatMatrix ginv = inverse(lattice.gram());
  RatMatrix gens(2 * n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gens(i, j) = ginv(i, j) * m;
    gens(n + i, i) = 1;
  }
  const RatMatrix sum_basis = lattice_basis(gens);
  const RatMatrix sum_gram = congruent(sum_basis, lattice.gram());
  return inverse(sum_gram) * sum_basis;
}

Lattice partial_dual(const Lattice& lattice, std::int64_t m) {
  const RatMatrix basis = partial_dual_basis(lattice, m);
  return Lattice(congruent(basis, lattice.gram()));
}

IntMatrix even_sublattice_basis(const Lattice& lattice) {
  if (!lattice.integral()) raise(ErrorKind::Parity, "even sublattice needs an integral lattice");
  if (lattice.even()) raise(ErrorKind::EvenInput, "lattice is already even");
  const auto n = lattice.dim();
  const auto& g = lattice.gram();
  std::size_t p = 0;
  while (g(p, p).get_num() % 2 == 0) ++p;
  IntMatrix basis(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p) {
      basis(i, i) = 2;
    } else if (g(i, i).get_num() % 2 == 0) {
      basis(i, i) = 1;
    } else {
      basis(i, i) = 1;
      basis(i, p) = -1;
    }
  }
  return basis;
}

Lattice even_sublattice(const Lattice& lattice) {
  const RatMatrix basis = to_rational(even_sublattice_basis(lattice));
  return Lattice(congruent(basis, lattice.gram()));
}

std::int64_t modular_level(const Lattice& lattice) {
  if (!lattice.integral()) raise(ErrorKind::Parity, "level is defined for integral lattices");
  const RatMatrix ginv = inverse(lattice.gram());
  Int level = 1;
  for (std::size_t i = 0; i < ginv.rows(); ++i)
    for (std::size_t j = 0; j < ginv.cols(); ++j) {
      Int need = ginv(i, j).get_den();
      // N * p/q must be even on the diagonal: for odd p this forces 2q | N.
      if (lattice.even() && i == j && ginv(i, j).get_num() % 2 != 0) need *= 2;
      level = lcm(level, need);
    }
  return to_int64(level, "level");
}

std::int64_t level(const Lattice& lattice) {
  if (!lattice.even()) raise(ErrorKind::Parity, "level is defined for even lattices");
  return modular_level(lattice);
}

Int superlattice_index(const Lattice& sub, const Lattice& super) {
  const Rat ratio = sub.det() / super.det();
  const auto root = rational_sqrt(ratio);
  if (!root || root->get_den() != 1)
    raise(ErrorKind::Domain, "determinant ratio " + ratio.get_str() + " is not a square integer");
  return root->get_num();
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  const auto n = a.dim() + b.dim();
  RatMatrix g(n, n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) g(i, j) = a.gram()(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) g(a.dim() + i, a.dim() + j) = b.gram()(i, j);
  return Lattice(std::move(g));
}

Lattice c_n_lattice(std::int64_t level) {
  if (!is_admissible_level(level))
    raise(ErrorKind::LevelNotAdmissible, "C_N needs an admissible level, got " + std::to_string(level));
  const auto ds = divisors(level);
  RatMatrix g(ds.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) g(i, i) = Rat(static_cast<long>(ds[i]));
  return Lattice(std::move(g));
}

Lattice standard_lattice(std::size_t n) { return Lattice(RatMatrix::identity(n)); }

std::optional<Rat> rational_sqrt(const Rat& x) {
  if (x < 0) return std::nullopt;
  if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t())) return std::nullopt;
  Int num, den;
  mpz_sqrt(num.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), x.get_den_mpz_t());
  Rat r(num, den);
  r.canonicalize();
  return r;
}

DensityReport density(std::size_t n, const Rat& min, const Rat& det) {
  if (n == 0 || min <= 0 || det <= 0) raise(ErrorKind::Domain, "density needs n >= 1 and positive min, det");
  DensityReport r;
  r.min = min;
  r.det = det;
  r.n = n;
  Int num, den;
  mpz_pow_ui(num.get_mpz_t(), min.get_num_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), min.get_den_mpz_t(), n);
  r.ratio_squared = Rat(num, den) / det;
  r.ratio_squared.canonicalize();
  r.ratio = rational_sqrt(r.ratio_squared);
  const double nd = static_cast<double>(n);
  const double log_min = std::log(min.get_d());
  const double log_det = std::log(det.get_d());
  const double log_vn = 0.5 * nd * std::log(std::numbers::pi) - std::lgamma(0.5 * nd + 1.0);
  r.delta = std::exp(log_vn - nd * std::numbers::ln2 + 0.5 * (nd * log_min - log_det));
  r.log10_ratio = (0.5 * (nd * log_min - log_det)) / std::numbers::ln10;
  return r;
}

DensityReport density(const Lattice& lattice, const Rat& min) {
  return density(lattice.dim(), min, lattice.det());
}

}  // namespace modlat
