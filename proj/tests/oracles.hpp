#pragma once

// Independent reference computations for the tests. Deliberately naive.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "modlat/matrix.hpp"

namespace oracle {

using modlat::Int;
using modlat::Rat;
using modlat::RatMatrix;

// Laplace expansion along the first row.
inline Rat det_laplace(const RatMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Rat d = 0;
  for (std::size_t c = 0; c < n; ++c) {
    RatMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) minor(i - 1, k++) = m(i, j);
    const Rat term = m(0, c) * det_laplace(minor);
    d += (c % 2 == 0) ? term : Rat(-term);
  }
  return d;
}

// Norm counts over the coordinate box |x_i| <= r_i.
inline std::map<Rat, std::uint64_t> box_counts(const RatMatrix& g, const Rat& bound, const std::vector<long>& radius) {
  const std::size_t n = g.rows();
  std::map<Rat, std::uint64_t> counts;
  std::vector<long> x(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      Rat s = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) s += g(a, b) * x[a] * x[b];
      if (s <= bound) ++counts[s];
      return;
    }
    for (long v = -radius[i]; v <= radius[i]; ++v) {
      x[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return counts;
}

// |x_i| <= sqrt(bound * (G^{-1})_{ii}) for every x with x G x^T <= bound.
inline std::vector<long> safe_radius(const RatMatrix& g, const Rat& bound) {
  const RatMatrix inv = modlat::inverse(g);
  std::vector<long> r(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i) r[i] = static_cast<long>(std::floor(std::sqrt(Rat(bound * inv(i, i)).get_d()) + 1e-9));
  return r;
}

// B B^T + I for a random small integer matrix B: integral, positive definite.
inline RatMatrix random_gram(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-2, 2);
  RatMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = d(rng);
  RatMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat s = (i == j) ? 1 : 0;
      for (std::size_t k = 0; k < n; ++k) s += b(i, k) * b(j, k);
      g(i, j) = s;
    }
  return g;
}

// E8 in its standard coordinates: integer or all-half-integer vectors with even
// coordinate sum. Counts norms <= 6 over the box |c| <= 5/2.
inline std::map<long, std::uint64_t> e8_standard_counts() {
  std::map<long, std::uint64_t> counts;
  std::vector<int> x(8);  // doubled coordinates
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int parity) {
    if (i == 8) {
      long s2 = 0, sum = 0;
      for (int v : x) {
        s2 += v * v;
        sum += v;
      }
      if (sum % 4 != 0 || s2 % 4 != 0) return;
      const long norm = s2 / 4;
      if (norm <= 6) ++counts[norm];
      return;
    }
    for (int v = -5; v <= 5; ++v) {
      if ((v & 1) != parity) continue;
      x[i] = v;
      rec(i + 1, parity);
    }
  };
  rec(0, 0);
  rec(0, 1);
  return counts;
}

}  // namespace oracle
