#include "modlat/shadow.hpp"

#include "modlat/errors.hpp"
#include "modlat/level_data.hpp"

namespace modlat {

ShadowCoset shadow_coset(const Lattice& lattice) {
  if (!lattice.integral()) raise(ErrorKind::Parity, "shadows are defined for integral lattices");
  const std::size_t n = lattice.dim();
  const RatMatrix& g = lattice.gram();
  const RatMatrix ginv = inverse(g);
  ShadowCoset c{Lattice(ginv), std::vector<Rat>(n, Rat(0)), std::vector<Rat>(n, Rat(0))};
  if (lattice.even()) return c;
  // In dual-basis coordinates the shift is diag(G)/2; back in L coordinates it is G^{-1} diag(G)/2.
  for (std::size_t i = 0; i < n; ++i) c.shift[i] = g(i, i) / 2;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c.lattice_shift[i] += ginv(i, j) * c.shift[j];
    c.lattice_shift[i].canonicalize();
  }
  if (!is_characteristic_half(lattice, c.lattice_shift))
    raise(ErrorKind::InternalInconsistency, "shadow representative is not half a characteristic vector");
  return c;
}

bool is_characteristic_half(const Lattice& lattice, const std::vector<Rat>& s) {
  const std::size_t n = lattice.dim();
  const RatMatrix& g = lattice.gram();
  for (std::size_t i = 0; i < n; ++i) {
    Rat ip = 0;
    for (std::size_t j = 0; j < n; ++j) ip += 2 * s[j] * g(j, i);
    const Rat diff = ip - g(i, i);
    if (diff.get_den() != 1 || diff.get_num() % 2 != 0) return false;
  }
  return true;
}

QSeries shadow_theta(const Lattice& lattice, const Rat& bound, const EnumerationOptions& options) {
  const ShadowCoset c = shadow_coset(lattice);
  const auto res = enumerate(c.base, bound, c.shift, false, options);
  // Shadow vectors are w/2 with w in L*, so norms lie in (1/(4 D)) Z.
  const Int d = 4 * common_denominator(c.base.gram());
  if (!d.fits_slong_p() || d.get_si() > (1L << 40)) raise(ErrorKind::ArithmeticOverflow, "shadow norm denominator");
  Int fl;
  const Rat bd = bound * d;
  mpz_fdiv_q(fl.get_mpz_t(), bd.get_num_mpz_t(), bd.get_den_mpz_t());
  Rat next(fl + 1, d);
  next.canonicalize();
  return counts_to_series(res.theta, QSeries::kDefaultDen * d.get_si(), next);
}

Rat shadow_min_formula(std::int64_t level, std::int64_t l, std::int64_t m) {
  const auto s1 = sigma1(level);
  Rat r(l * s1 - 8 * m, 4 * level);
  r.canonicalize();
  return r;
}

ShadowReport shadow_min(const Lattice& lattice, std::int64_t level, const EnumerationOptions& options) {
  if (!lattice.integral()) raise(ErrorKind::Parity, "shadows are defined for integral lattices");
  if (lattice.even()) raise(ErrorKind::EvenInput, "shadow minimum needs an odd lattice; the shadow of an even lattice is L*");
  if (!is_admissible_level(level))
    raise(ErrorKind::LevelNotAdmissible, "level " + std::to_string(level) + " is not admissible");
  if (level % 2 == 0)
    raise(ErrorKind::Parameter, "the shadow minimum formula is only stated for odd levels, got " + std::to_string(level));
  const auto s0 = sigma0(level);
  ShadowReport r;
  r.level = level;
  r.dim = lattice.dim();
  if (static_cast<std::int64_t>(r.dim) % s0 != 0)
    raise(ErrorKind::Parameter, "dimension " + std::to_string(r.dim) + " is not a multiple of sigma_0(N) = " +
                                    std::to_string(s0));
  r.l = static_cast<std::int64_t>(r.dim) / s0;
  const ShadowCoset c = shadow_coset(lattice);
  const auto mr = coset_minimum(c.base, c.shift, options);
  r.min0 = mr.min;
  r.count = mr.count;
  r.m = (Rat(r.l * sigma1(level)) - 4 * level * r.min0) / 8;
  r.m.canonicalize();
  r.m_admissible = r.m.get_den() == 1 && r.m >= 0;
  if (r.m_admissible) r.predicted = shadow_min_formula(level, r.l, r.m.get_num().get_si());
  return r;
}

std::int64_t odd_min_bound(std::int64_t level, std::int64_t dim) {
  const auto data = level_data(level);
  if (dim <= 0) raise(ErrorKind::Domain, "dimension must be positive");
  if (dim == 2 * data.kN - data.sigma0) return 3;
  return 2 * (dim / (2 * data.kN)) + 2;
}

}  // namespace modlat
