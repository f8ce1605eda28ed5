#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "modlat/matrix.hpp"

namespace modlat {

/// Truncated power series in a fractional power of q with exact rational
/// coefficients.
///
/// Exponents are integers counted in units of q^(1/den). The default unit is
/// q^(1/12), which lets eta products stay integral; shadow series of
/// N-modular lattices use a multiple of 12 so that norms in (1/4N)Z stay
/// integral as well. Coefficients are known exactly for every exponent below
/// precision() and unknown beyond it. Zero coefficients are never stored, so
/// two series with the same unit and precision are equal iff their term maps
/// are equal.
class QSeries {
 public:
  using Exponent = std::int64_t;
  static constexpr Exponent kDefaultDen = 12;

  explicit QSeries(Exponent precision = 0, Exponent den = kDefaultDen);

  static QSeries constant(const Rat& c, Exponent precision, Exponent den = kDefaultDen);
  /// Build from exponents in whole q-units, e.g. {{0,1},{2,240}} with precision in q.
  static QSeries from_q_terms(std::initializer_list<std::pair<Exponent, long>> terms, Exponent precision_in_q);

  Exponent precision() const noexcept { return precision_; }
  Exponent den() const noexcept { return den_; }
  /// Precision measured in whole powers of q (rounded up).
  Exponent precision_in_q() const noexcept { return (precision_ + den_ - 1) / den_; }

  const std::map<Exponent, Rat>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Smallest exponent with a nonzero coefficient; precision() if none known.
  Exponent valuation() const noexcept;

  /// Coefficient at an exponent (in units); throws Domain past the precision.
  Rat coeff(Exponent e) const;
  /// Coefficient of q^j (whole q power).
  Rat coeff_q(Exponent j) const { return coeff(j * den_); }

  /// Adds c to the coefficient at e; ignored if e >= precision.
  void add_term(Exponent e, const Rat& c);

  bool integer_granularity() const noexcept;

  QSeries truncated(Exponent precision) const;
  /// Same series re-expressed in units of q^(1/new_den); new_den must be a multiple of den().
  QSeries with_den(Exponent new_den) const;

  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  QSeries operator-() const;
  friend QSeries operator*(const Rat& c, const QSeries& a);

  bool operator==(const QSeries& o) const {
    return precision_ == o.precision_ && den_ == o.den_ && terms_ == o.terms_;
  }

  /// "1 + 240*q^2 + O(q^4)"; fractional exponents print as q^(3/4).
  std::string to_string() const;
  /// {"unit":"q","prec":P,"terms":[[e,"c"],...]}; fractional exponents and
  /// precision become strings such as "3/4".
  nlohmann::json to_json() const;

 private:
  std::map<Exponent, Rat> terms_;
  Exponent precision_;
  Exponent den_;
};

QSeries pow(const QSeries& a, std::uint64_t e);

enum class QSeriesOp { Add, Sub, Mul };
QSeries qs_arith(const QSeries& a, const QSeries& b, QSeriesOp op);

/// Result of comparing two series on their common window.
struct SeriesComparison {
  bool equal = true;
  QSeries::Exponent window = 0;  // compared exponents are < window (in units)
  QSeries::Exponent den = QSeries::kDefaultDen;
  std::optional<QSeries::Exponent> first_difference;
};
SeriesComparison compare(const QSeries& a, const QSeries& b);

/// eta(m z) to the given precision (units of q^(1/12)).
QSeries dedekind_eta(std::int64_t scale, QSeries::Exponent precision);

/// Delta_N = prod_{m | N} eta(m z)^(24/sigma_1(N)), truncated to precision (units of q^(1/12)).
QSeries delta_N(std::int64_t level, QSeries::Exponent precision);

/// Coefficient bound for the unknown tail of a series: |a_j| <= (1 + 2 sqrt(j/min))^dim
/// for every exponent j (in q). This is the packing bound on the number of
/// vectors of norm <= j in a lattice coset of minimum distance^2 >= min.
struct TailBound {
  int dim = 0;
  double min_norm = 1.0;
  double step = 0.0;  // spacing of the possible exponents in q; 0 means the series unit
  double operator()(double j) const;
};

struct ImagEvaluation {
  double value = 0.0;
  double tail = 0.0;      // rigorous bound on the omitted tail
  double rounding = 0.0;  // bound on floating rounding of the partial sum
  double error() const { return tail + rounding; }
};

/// Evaluates sum_j a_j exp(-pi j t) (exponent j in q) at z = i t. With
/// alternate=true evaluates at z = 1 + i t, i.e. multiplies a_j by (-1)^j
/// (requires integer granularity). The tail bound is omitted when no bound is
/// supplied; then the series must be known to be exact (e.g. a polynomial).
ImagEvaluation eval_at_imag(const QSeries& s, const Rat& t, const std::optional<TailBound>& tail,
                            bool alternate = false);

}  // namespace modlat
