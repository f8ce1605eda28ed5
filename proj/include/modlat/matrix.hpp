#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace modlat {

using Int = mpz_class;
using Rat = mpq_class;

/// Dense row-major matrix. Used with Int (mpz) and Rat (mpq) entries.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows);

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    for (const auto& v : r) data_.push_back(v);
  }
}

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

RatMatrix to_rational(const IntMatrix& m);
RatMatrix scaled(const RatMatrix& m, const Rat& c);

/// Least common denominator of all entries.
Int common_denominator(const RatMatrix& m);

/// m * d as an integer matrix; throws if an entry is not integral after scaling.
IntMatrix integer_multiple(const RatMatrix& m, const Int& d);

bool is_integral(const RatMatrix& m);
bool is_symmetric(const RatMatrix& m);

/// Fraction-free (Bareiss) determinant.
Int bareiss_determinant(IntMatrix m);
Rat determinant(const RatMatrix& m);

/// Leading principal minors 1..n computed by one Bareiss pass.
std::vector<Rat> leading_principal_minors(const RatMatrix& m);

/// Exact inverse by Gauss-Jordan; throws Domain on singular input.
RatMatrix inverse(const RatMatrix& m);

std::size_t rank(RatMatrix m);

/// Row-style Hermite normal form of the lattice spanned by the rows of
/// `generators`. Returns a basis (nonzero rows only), upper triangular with
/// positive pivots and reduced entries above each pivot.
IntMatrix hermite_normal_form(IntMatrix generators);

/// HNF basis of the Z-span of rational generator rows.
RatMatrix lattice_basis(const RatMatrix& generators);

/// Gram matrix B * G * B^T for basis rows B.
RatMatrix congruent(const RatMatrix& basis, const RatMatrix& gram);

std::string to_string(const RatMatrix& m);

}  // namespace modlat
