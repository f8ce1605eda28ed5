#include "modlat/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "modlat/errors.hpp"
#include "modlat/level_data.hpp"

namespace modlat {

namespace {

QSeries::Exponent checked_add(QSeries::Exponent a, QSeries::Exponent b) {
  QSeries::Exponent r;
  if (__builtin_add_overflow(a, b, &r)) raise(ErrorKind::ArithmeticOverflow, "q-series exponent overflow");
  return r;
}

QSeries::Exponent checked_mul(QSeries::Exponent a, QSeries::Exponent b) {
  QSeries::Exponent r;
  if (__builtin_mul_overflow(a, b, &r)) raise(ErrorKind::ArithmeticOverflow, "q-series exponent overflow");
  return r;
}

void require_same_unit(const QSeries& a, const QSeries& b) {
  if (a.den() != b.den())
    raise(ErrorKind::Granularity, "q-series with different exponent units (q^(1/" + std::to_string(a.den()) +
                                      ") vs q^(1/" + std::to_string(b.den()) + "))");
}

}  // namespace

QSeries::QSeries(Exponent precision, Exponent den) : precision_(precision), den_(den) {
  if (den <= 0) raise(ErrorKind::Domain, "q-series unit denominator must be positive");
  if (precision < 0) raise(ErrorKind::Domain, "negative q-series precision");
}

QSeries QSeries::constant(const Rat& c, Exponent precision, Exponent den) {
  QSeries s(precision, den);
  s.add_term(0, c);
  return s;
}

QSeries QSeries::from_q_terms(std::initializer_list<std::pair<Exponent, long>> terms, Exponent precision_in_q) {
  QSeries s(checked_mul(precision_in_q, kDefaultDen));
  for (const auto& [j, c] : terms) s.add_term(checked_mul(j, kDefaultDen), Rat(c));
  return s;
}

QSeries::Exponent QSeries::valuation() const noexcept {
  return terms_.empty() ? precision_ : terms_.begin()->first;
}

Rat QSeries::coeff(Exponent e) const {
  if (e < 0) return 0;
  if (e >= precision_)
    raise(ErrorKind::Domain, "coefficient at exponent " + std::to_string(e) + " is beyond precision " +
                                 std::to_string(precision_));
  auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

void QSeries::add_term(Exponent e, const Rat& c) {
  if (e < 0) raise(ErrorKind::Domain, "negative q-series exponent");
  if (e >= precision_ || c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (inserted) {
    it->second.canonicalize();
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool QSeries::integer_granularity() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [this](const auto& t) { return t.first % den_ == 0; });
}

QSeries QSeries::truncated(Exponent precision) const {
  QSeries s(std::min(precision, precision_), den_);
  for (const auto& [e, c] : terms_) {
    if (e >= s.precision_) break;
    s.terms_.emplace(e, c);
  }
  return s;
}

QSeries QSeries::with_den(Exponent new_den) const {
  if (new_den % den_ != 0) raise(ErrorKind::Granularity, "new unit must refine the old one");
  const Exponent f = new_den / den_;
  QSeries s(checked_mul(precision_, f), new_den);
  for (const auto& [e, c] : terms_) s.terms_.emplace(checked_mul(e, f), c);
  return s;
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  require_same_unit(a, b);
  QSeries r = a.truncated(std::min(a.precision(), b.precision()));
  for (const auto& [e, c] : b.terms()) r.add_term(e, c);
  return r;
}

QSeries QSeries::operator-() const {
  QSeries r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const Rat& c, const QSeries& a) {
  QSeries r(a.precision(), a.den());
  if (c == 0) return r;
  for (const auto& [e, v] : a.terms()) r.add_term(e, c * v);
  return r;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
  require_same_unit(a, b);
  // Coefficient e of a*b needs a below e - val(b) and b below e - val(a).
  const auto prec = std::min(checked_add(a.precision(), b.valuation()), checked_add(b.precision(), a.valuation()));
  QSeries r(prec, a.den());
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      const auto e = checked_add(ea, eb);
      if (e >= prec) break;
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

QSeries pow(const QSeries& a, std::uint64_t e) {
  QSeries result = QSeries::constant(1, std::numeric_limits<QSeries::Exponent>::max() / 4, a.den());
  if (e == 0) return result.truncated(a.precision());
  QSeries base = a;
  bool first = true;
  while (e) {
    if (e & 1) {
      result = first ? base : result * base;
      first = false;
    }
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

QSeries qs_arith(const QSeries& a, const QSeries& b, QSeriesOp op) {
  switch (op) {
    case QSeriesOp::Add: return a + b;
    case QSeriesOp::Sub: return a - b;
    case QSeriesOp::Mul: return a * b;
  }
  raise(ErrorKind::Domain, "unknown q-series operation");
}

SeriesComparison compare(const QSeries& a, const QSeries& b) {
  require_same_unit(a, b);
  SeriesComparison out;
  out.den = a.den();
  out.window = std::min(a.precision(), b.precision());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  // Walk both sparse maps in exponent order and stop at the first mismatch.
  while (true) {
    const auto ea = ia == a.terms().end() ? out.window : std::min(ia->first, out.window);
    const auto eb = ib == b.terms().end() ? out.window : std::min(ib->first, out.window);
    if (ea >= out.window && eb >= out.window) break;
    if (ea != eb || ia->second != ib->second) {
      out.equal = false;
      out.first_difference = std::min(ea, eb);
      break;
    }
    ++ia;
    ++ib;
  }
  return out;
}

namespace {

std::string exponent_text(QSeries::Exponent e, QSeries::Exponent den) {
  Rat x(e, den);
  x.canonicalize();
  return x.get_den() == 1 ? x.get_num().get_str() : "(" + x.get_str() + ")";
}

}  // namespace

std::string QSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rat mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << "*";
    os << "q";
    if (e != den_) os << "^" << exponent_text(e, den_);
  }
  if (!first) os << " + ";
  os << "O(q^" << exponent_text(precision_, den_) << ")";
  return os.str();
}

nlohmann::json QSeries::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  if (integer_granularity()) {
    for (const auto& [e, c] : terms_) terms.push_back({e / den_, c.get_str()});
    return {{"unit", "q"}, {"prec", precision_in_q()}, {"terms", terms}};
  }
  auto text = [this](Exponent e) {
    Rat x(e, den_);
    x.canonicalize();
    return x.get_str();
  };
  for (const auto& [e, c] : terms_) terms.push_back({text(e), c.get_str()});
  return {{"unit", "q"}, {"prec", text(precision_)}, {"terms", terms}};
}

QSeries dedekind_eta(std::int64_t scale, QSeries::Exponent precision) {
  if (scale <= 0) raise(ErrorKind::Domain, "eta scale must be positive");
  if (precision <= 0) raise(ErrorKind::Domain, "eta precision must be positive");
  // eta(mz) = q^(m/12) prod_n (1 - q^(2mn)); in units of q^(1/12) the factors are (1 - x^(24mn)).
  std::vector<Int> c(static_cast<std::size_t>(precision), 0);
  if (scale < precision) c[static_cast<std::size_t>(scale)] = 1;
  const auto step0 = checked_mul(24, scale);
  for (QSeries::Exponent step = step0; checked_add(step, scale) < precision; step = checked_add(step, step0)) {
    for (auto e = precision - 1; e >= step; --e) c[e] -= c[e - step];
  }
  QSeries s(precision);
  for (QSeries::Exponent e = 0; e < precision; ++e)
    if (c[e] != 0) s.add_term(e, Rat(c[e]));
  return s;
}

QSeries delta_N(std::int64_t level, QSeries::Exponent precision) {
  const auto data = level_data(level);
  const auto power = static_cast<std::uint64_t>(24 / data.sigma1);
  QSeries result = QSeries::constant(1, checked_add(precision, 0));
  for (auto m : divisors(level)) {
    // eta(mz)^power has valuation m*power; the other factors only need precision minus that.
    result = result * pow(dedekind_eta(m, precision), power);
  }
  return result.truncated(precision);
}

double TailBound::operator()(double j) const {
  if (j <= 0) return 1.0;
  return std::pow(1.0 + 2.0 * std::sqrt(j / min_norm), dim);
}

ImagEvaluation eval_at_imag(const QSeries& s, const Rat& t, const std::optional<TailBound>& tail, bool alternate) {
  if (t <= 0) raise(ErrorKind::Domain, "evaluation point must have positive imaginary part");
  if (alternate && !s.integer_granularity())
    raise(ErrorKind::Granularity, "alternating evaluation needs integer q exponents");
  const double tv = t.get_d();
  const double den = static_cast<double>(s.den());
  ImagEvaluation out;
  double abs_sum = 0.0;
  long double sum = 0.0L;
  for (const auto& [e, c] : s.terms()) {
    const double j = static_cast<double>(e) / den;
    long double term = static_cast<long double>(c.get_d()) * std::exp(-std::numbers::pi_v<long double> * j * tv);
    if (alternate && ((e / s.den()) % 2 != 0)) term = -term;
    sum += term;
    abs_sum += std::fabs(static_cast<double>(term));
  }
  out.value = static_cast<double>(sum);
  const double eps = std::numeric_limits<double>::epsilon();
  out.rounding = 8.0 * eps * (static_cast<double>(s.terms().size()) + 4.0) * std::max(abs_sum, 1e-300);

  if (!tail) return out;
  // Unknown coefficients live at exponents >= precision; bound them on the unit grid.
  const double step = tail->step > 0 ? tail->step : 1.0 / den;
  double j = std::ceil(static_cast<double>(s.precision()) / den / step - 1e-9) * step;
  double acc = 0.0;
  for (int iter = 0; iter < 50'000'000; ++iter) {
    const double term = (*tail)(j)*std::exp(-std::numbers::pi * j * tv);
    const double ratio = (*tail)(j + step) / (*tail)(j)*std::exp(-std::numbers::pi * step * tv);
    acc += term;
    // The ratio of consecutive bounds decreases in j, so a geometric tail dominates.
    if (ratio < 1.0) {
      const double rest = term * ratio / (1.0 - ratio);
      if (rest <= 1e-3 * acc || rest < 1e-300) {
        acc += rest;
        out.tail = acc * (1.0 + 1e-9);
        return out;
      }
    }
    j += step;
  }
  out.tail = std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace modlat
