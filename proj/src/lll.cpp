#include "modlat/lll.hpp"

#include "modlat/errors.hpp"

namespace modlat {

namespace {

Int round_nearest(const Rat& x) {
  // floor(x + 1/2)
  Rat y = x + Rat(1, 2);
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return q;
}

}  // namespace

// Gram-matrix LLL with incremental Gram-Schmidt data (mu, B), following the
// classical integral-basis formulation: size reduction updates the Gram matrix
// in place, swaps update mu and B in O(n).
LllResult lll_reduce_gram(const RatMatrix& input, const Rat& delta) {
  if (!input.square()) raise(ErrorKind::Shape, "LLL needs a square Gram matrix");
  const std::size_t n = input.rows();
  RatMatrix g = input;
  IntMatrix h = IntMatrix::identity(n);
  if (n <= 1) return {g, h};

  RatMatrix mu(n, n);
  std::vector<Rat> b(n);
  b[0] = g(0, 0);
  std::size_t k = 1;
  std::size_t kmax = 0;

  auto reduce = [&](std::size_t kk, std::size_t l) {
    if (abs(mu(kk, l)) * 2 <= 1) return;
    const Int q = round_nearest(mu(kk, l));
    const Rat qr(q);
    for (std::size_t j = 0; j < n; ++j) h(kk, j) -= q * h(l, j);
    // b_k <- b_k - q b_l in the Gram matrix.
    const Rat gkk = g(kk, kk) - 2 * qr * g(kk, l) + qr * qr * g(l, l);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == kk) continue;
      g(kk, i) -= qr * g(l, i);
      g(i, kk) = g(kk, i);
    }
    g(kk, kk) = gkk;
    mu(kk, l) -= qr;
    for (std::size_t i = 0; i < l; ++i) mu(kk, i) -= qr * mu(l, i);
  };

  auto swap = [&](std::size_t kk) {
    h.swap_rows(kk, kk - 1);
    g.swap_rows(kk, kk - 1);
    for (std::size_t i = 0; i < n; ++i) std::swap(g(i, kk), g(i, kk - 1));
    for (std::size_t j = 0; j + 1 < kk; ++j) std::swap(mu(kk, j), mu(kk - 1, j));
    const Rat m = mu(kk, kk - 1);
    const Rat bb = b[kk] + m * m * b[kk - 1];
    mu(kk, kk - 1) = m * b[kk - 1] / bb;
    b[kk] = b[kk - 1] * b[kk] / bb;
    b[kk - 1] = bb;
    for (std::size_t i = kk + 1; i <= kmax; ++i) {
      const Rat t = mu(i, kk);
      mu(i, kk) = mu(i, kk - 1) - m * t;
      mu(i, kk - 1) = t + mu(kk, kk - 1) * mu(i, kk);
    }
  };

  while (k < n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 0; j <= k; ++j) {
        Rat s = g(k, j);
        for (std::size_t i = 0; i < j; ++i) s -= mu(j, i) * mu(k, i) * b[i];
        if (j < k) {
          mu(k, j) = s / b[j];
        } else {
          b[k] = s;
        }
      }
      if (b[k] <= 0) raise(ErrorKind::Definiteness, "LLL input is not positive definite");
    }
    reduce(k, k - 1);
    if (b[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * b[k - 1]) {
      swap(k);
      if (k > 1) --k;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
      ++k;
    }
  }
  return {g, h};
}

IntMatrix unimodular_inverse(const IntMatrix& t) {
  const RatMatrix inv = inverse(to_rational(t));
  return integer_multiple(inv, 1);
}

}  // namespace modlat
