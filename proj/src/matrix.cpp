#include "modlat/matrix.hpp"

#include <sstream>

#include "modlat/errors.hpp"

namespace modlat {

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

RatMatrix scaled(const RatMatrix& m, const Rat& c) {
  RatMatrix r = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) *= c;
  return r;
}

Int common_denominator(const RatMatrix& m) {
  Int d = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m(i, j).get_den_mpz_t());
  return d;
}

IntMatrix integer_multiple(const RatMatrix& m, const Int& d) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Rat v = m(i, j) * d;
      if (v.get_den() != 1) raise(ErrorKind::Domain, "entry not integral after scaling");
      r(i, j) = v.get_num();
    }
  return r;
}

bool is_integral(const RatMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j).get_den() != 1) return false;
  return true;
}

bool is_symmetric(const RatMatrix& m) {
  if (!m.square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

Int bareiss_determinant(IntMatrix m) {
  if (!m.square()) raise(ErrorKind::Shape, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

Rat determinant(const RatMatrix& m) {
  const Int d = common_denominator(m);
  Rat det(bareiss_determinant(integer_multiple(m, d)));
  Int dn;
  mpz_pow_ui(dn.get_mpz_t(), d.get_mpz_t(), m.rows());
  det /= Rat(dn);
  det.canonicalize();
  return det;
}

std::vector<Rat> leading_principal_minors(const RatMatrix& in) {
  const std::size_t n = in.rows();
  const Int d = common_denominator(in);
  IntMatrix m = integer_multiple(in, d);
  std::vector<Rat> minors(n, Rat(0));
  Int prev = 1;
  Int dk = 1;
  for (std::size_t k = 0; k < n; ++k) {
    dk *= d;
    minors[k] = Rat(m(k, k)) / Rat(dk);
    if (m(k, k) == 0) break;
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return minors;
}

RatMatrix inverse(const RatMatrix& in) {
  if (!in.square()) raise(ErrorKind::Shape, "inverse of non-square matrix");
  const std::size_t n = in.rows();
  RatMatrix a = in;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) raise(ErrorKind::Domain, "singular matrix");
    a.swap_rows(c, p);
    inv.swap_rows(c, p);
    const Rat piv = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      const Rat f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

std::size_t rank(RatMatrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      const Rat f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

IntMatrix hermite_normal_form(IntMatrix a) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    // Euclid on column c among rows >= pivot_row.
    while (true) {
      std::size_t best = rows;
      for (std::size_t r = pivot_row; r < rows; ++r) {
        if (a(r, c) == 0) continue;
        if (best == rows || abs(a(r, c)) < abs(a(best, c))) best = r;
      }
      if (best == rows) break;
      a.swap_rows(pivot_row, best);
      bool done = true;
      for (std::size_t r = pivot_row + 1; r < rows; ++r) {
        if (a(r, c) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(r, c).get_mpz_t(), a(pivot_row, c).get_mpz_t());
        for (std::size_t j = c; j < cols; ++j) a(r, j) -= q * a(pivot_row, j);
        if (a(r, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a(pivot_row, c) == 0) continue;
    if (a(pivot_row, c) < 0)
      for (std::size_t j = c; j < cols; ++j) a(pivot_row, j) = -a(pivot_row, j);
    for (std::size_t r = 0; r < pivot_row; ++r) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), a(r, c).get_mpz_t(), a(pivot_row, c).get_mpz_t());
      if (q == 0) continue;
      for (std::size_t j = c; j < cols; ++j) a(r, j) -= q * a(pivot_row, j);
    }
    pivot_cols.push_back(c);
    ++pivot_row;
  }
  IntMatrix basis(pivot_row, cols);
  for (std::size_t r = 0; r < pivot_row; ++r)
    for (std::size_t j = 0; j < cols; ++j) basis(r, j) = a(r, j);
  return basis;
}

RatMatrix lattice_basis(const RatMatrix& generators) {
  const Int d = common_denominator(generators);
  IntMatrix h = hermite_normal_form(integer_multiple(generators, d));
  return scaled(to_rational(h), Rat(1) / Rat(d));
}

RatMatrix congruent(const RatMatrix& basis, const RatMatrix& gram) {
  return basis * gram * basis.transpose();
}

std::string to_string(const RatMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace modlat
