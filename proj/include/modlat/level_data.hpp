#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace modlat {

std::int64_t sigma0(std::int64_t n);
std::int64_t sigma1(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
/// Divisors m of n with gcd(m, n/m) = 1.
std::vector<std::int64_t> exact_divisors(std::int64_t n);

/// True iff sigma_1(n) divides 24.
bool is_admissible_level(std::int64_t n) noexcept;

inline constexpr std::array<std::int64_t, 10> kAdmissibleLevels = {1, 2, 3, 5, 6, 7, 11, 14, 15, 23};

/// Per-level constants of the ring C[theta_N, Delta_N].
struct LevelData {
  std::int64_t level = 1;
  std::int64_t sigma0 = 1;
  std::int64_t sigma1 = 1;
  std::int64_t kN = 12;  // weight of Delta_N, 12 sigma0 / sigma1
  std::int64_t dN = 4;   // weight of theta_N; the base lattice has dimension 2 dN
};

/// Throws LevelNotAdmissible unless sigma_1(N) | 24.
LevelData level_data(std::int64_t level);

}  // namespace modlat
