#include "modlat/level_data.hpp"

#include <numeric>
#include <string>

#include "modlat/errors.hpp"

namespace modlat {

std::vector<std::int64_t> divisors(std::int64_t n) {
  if (n <= 0) raise(ErrorKind::Domain, "divisors of non-positive integer");
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

std::vector<std::int64_t> exact_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (auto d : divisors(n))
    if (std::gcd(d, n / d) == 1) out.push_back(d);
  return out;
}

std::int64_t sigma0(std::int64_t n) { return static_cast<std::int64_t>(divisors(n).size()); }

std::int64_t sigma1(std::int64_t n) {
  const auto ds = divisors(n);
  return std::accumulate(ds.begin(), ds.end(), std::int64_t{0});
}

bool is_admissible_level(std::int64_t n) noexcept {
  if (n <= 0 || n > 24) return false;  // sigma_1(n) > n for n > 1
  return 24 % sigma1(n) == 0;
}

LevelData level_data(std::int64_t level) {
  if (!is_admissible_level(level))
    raise(ErrorKind::LevelNotAdmissible, "sigma_1(" + std::to_string(level) + ") does not divide 24");
  LevelData d;
  d.level = level;
  d.sigma0 = sigma0(level);
  d.sigma1 = sigma1(level);
  d.kN = 12 * d.sigma0 / d.sigma1;
  // Half-dimension of the smallest even strongly N-modular lattice.
  switch (level) {
    case 1: d.dN = 4; break;
    case 2: d.dN = 2; break;
    case 3: d.dN = 1; break;
    case 5: d.dN = 2; break;
    case 6: d.dN = 2; break;
    case 7: d.dN = 1; break;
    case 11: d.dN = 1; break;
    case 14: d.dN = 2; break;
    case 15: d.dN = 2; break;
    case 23: d.dN = 1; break;
    default: raise(ErrorKind::InternalInconsistency, "no d_N entry for admissible level");
  }
  return d;
}

}  // namespace modlat
