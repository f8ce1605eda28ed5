#include "modlat/modular.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "modlat/catalog.hpp"
#include "modlat/errors.hpp"
#include "modlat/level_data.hpp"
#include "modlat/lll.hpp"
#include "modlat/shadow.hpp"

namespace modlat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double estimated_count(const Lattice& lattice, double bound) {
  const double n = static_cast<double>(lattice.dim());
  const double log_vn = 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0);
  return std::exp(log_vn + 0.5 * n * std::log(std::max(bound, 1e-300)) - 0.5 * std::log(lattice.det().get_d()));
}

Int int_pow(std::int64_t base, std::size_t e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
  return r;
}

}  // namespace

const char* to_string(ModularStatus s) noexcept {
  switch (s) {
    case ModularStatus::FormalPass: return "formal-pass";
    case ModularStatus::ExactPass: return "exact-pass";
    case ModularStatus::Fail: return "fail";
    case ModularStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

bool ModularityVerdict::formally_strongly_modular() const {
  return !divisors.empty() && std::all_of(divisors.begin(), divisors.end(), [](const auto& d) { return d.formal; });
}

bool ModularityVerdict::formally_modular() const {
  for (const auto& d : divisors)
    if (d.m == level) return d.formal;
  return false;
}

bool ModularityVerdict::strongly_modular() const {
  return !divisors.empty() && std::all_of(divisors.begin(), divisors.end(),
                                          [](const auto& d) { return d.status == ModularStatus::ExactPass; });
}

QSeries::Exponent affordable_window(const Lattice& lattice, QSeries::Exponent requested, std::uint64_t budget) {
  QSeries::Exponent w = std::max<QSeries::Exponent>(requested, 1);
  while (w > 2 && estimated_count(lattice, static_cast<double>(w - 1)) > static_cast<double>(budget)) --w;
  return w;
}

IsometrySearch find_isometry(const Lattice& from, const Lattice& to, std::uint64_t budget,
                             const EnumerationOptions& options) {
  IsometrySearch out;
  const std::size_t n = from.dim();
  if (to.dim() != n || from.det() != to.det() || !from.integral() || !to.integral()) return out;

  const LllResult red = lll_reduce_gram(from.gram());
  const IntMatrix g1 = integer_multiple(red.gram, 1);
  const IntMatrix g2 = integer_multiple(to.gram(), 1);
  Rat top = red.gram(0, 0);
  for (std::size_t i = 1; i < n; ++i) top = std::max(top, red.gram(i, i));

  EnumerationOptions opt = options;
  EnumerationResult shorts;
  try {
    shorts = enumerate(to, top, std::nullopt, true, opt);
  } catch (const CapacityError&) {
    out.exhausted = true;
    return out;
  }
  std::vector<const std::vector<CoordRow>*> cand(n, nullptr);
  static const std::vector<CoordRow> none;
  for (std::size_t i = 0; i < n; ++i) {
    cand[i] = &none;
    for (const auto& layer : shorts.layers)
      if (layer.norm == red.gram(i, i)) cand[i] = &layer.vectors;
  }

  std::vector<std::int64_t> g2i(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g2i[i * n + j] = g2(i, j).get_si();
  // u[j] = G2 w_j for the chosen images.
  std::vector<std::vector<std::int64_t>> u(n, std::vector<std::int64_t>(n, 0));
  std::vector<std::size_t> pick(n, 0);
  std::vector<const CoordRow*> image(n, nullptr);

  auto fits = [&](std::size_t i, const CoordRow& w) {
    for (std::size_t j = 0; j < i; ++j) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < n; ++k) s += w[k] * u[j][k];
      if (s != g1(i, j).get_si()) return false;
    }
    return true;
  };
  auto first_nonzero_positive = [](const CoordRow& w) {
    for (auto v : w)
      if (v != 0) return v > 0;
    return false;
  };

  std::size_t i = 0;
  pick[0] = 0;
  while (true) {
    bool placed = false;
    while (pick[i] < cand[i]->size()) {
      const CoordRow& w = (*cand[i])[pick[i]++];
      // -1 is always an automorphism, so the first image can be taken up to sign.
      if (i == 0 && !first_nonzero_positive(w)) continue;
      if (!fits(i, w)) continue;
      if (++out.nodes > budget) {
        out.exhausted = true;
        return out;
      }
      image[i] = &w;
      for (std::size_t r = 0; r < n; ++r) {
        std::int64_t s = 0;
        for (std::size_t k = 0; k < n; ++k) s += g2i[r * n + k] * w[k];
        u[i][r] = s;
      }
      placed = true;
      break;
    }
    if (placed) {
      if (i + 1 == n) break;
      ++i;
      pick[i] = 0;
      continue;
    }
    if (i == 0) return out;
    --i;
  }

  // Images of the reduced basis; pull back to the original basis of `from`.
  RatMatrix w(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) w(r, k) = (*image[r])[k];
  const RatMatrix images = to_rational(unimodular_inverse(red.transform)) * w;
  if (congruent(images, to.gram()) != from.gram())
    raise(ErrorKind::InternalInconsistency, "isometry search produced a map that does not preserve the form");
  out.images = integer_multiple(images, 1);
  return out;
}

ModularityVerdict check_modular(const Lattice& lattice, const ModularCheckOptions& options) {
  if (!lattice.integral()) raise(ErrorKind::Parity, "modularity is checked for integral lattices");
  ModularityVerdict v;
  v.level = modular_level(lattice);
  v.window = affordable_window(lattice, options.precision, options.vector_budget);
  std::optional<QSeries> theta_l;

  for (auto m : exact_divisors(v.level)) {
    DivisorVerdict d;
    d.m = m;
    const Lattice other = rescale(partial_dual(lattice, m), Rat(m));
    if (m == 1) {
      // L meets L* in L itself; the inverse basis change is an isometry
      d.formal = true;
      d.status = ModularStatus::ExactPass;
      d.isometry = integer_multiple(inverse(partial_dual_basis(lattice, 1)), 1);
      d.reason = "m = 1 is the lattice itself";
      v.divisors.push_back(std::move(d));
      continue;
    }
    if (other.gram() == lattice.gram()) {
      d.formal = true;
      d.status = ModularStatus::ExactPass;
      d.isometry = IntMatrix::identity(lattice.dim());
      d.reason = "identical Gram matrix";
      v.divisors.push_back(std::move(d));
      continue;
    }
    if (other.det() != lattice.det()) {
      d.status = ModularStatus::Fail;
      d.reason = "determinant " + other.det().get_str() + " of the rescaled partial dual differs from " +
                 lattice.det().get_str();
      v.divisors.push_back(std::move(d));
      continue;
    }
    if (!other.integral() || other.even() != lattice.even()) {
      d.status = ModularStatus::Fail;
      d.reason = other.integral() ? "rescaled partial dual has different parity" : "rescaled partial dual is not integral";
      v.divisors.push_back(std::move(d));
      continue;
    }
    if (!theta_l) theta_l = theta_series(lattice, v.window, options.enumeration);
    const QSeries theta_m = theta_series(other, v.window, options.enumeration);
    const auto cmp = compare(*theta_l, theta_m);
    if (!cmp.equal) {
      d.status = ModularStatus::Fail;
      d.first_difference = *cmp.first_difference / cmp.den;
      d.reason = "theta series differ at q^" + std::to_string(*d.first_difference);
      v.divisors.push_back(std::move(d));
      continue;
    }
    d.formal = true;
    d.status = ModularStatus::FormalPass;
    if (options.isometry) {
      if (lattice.dim() > options.isometry_dim_cap) {
        d.reason = "dimension above the isometry search cap";
      } else {
        const auto iso = find_isometry(lattice, other, options.isometry_budget, options.enumeration);
        d.nodes = iso.nodes;
        if (iso.images) {
          d.status = ModularStatus::ExactPass;
          d.isometry = iso.images;
        } else if (iso.exhausted) {
          d.status = ModularStatus::Inconclusive;
          d.reason = "isometry search budget of " + std::to_string(options.isometry_budget) + " nodes exhausted";
        } else {
          d.status = ModularStatus::Fail;
          d.reason = "exhaustive search found no isometry";
        }
      }
    }
    v.divisors.push_back(std::move(d));
  }
  return v;
}

QSeries theta_base(std::int64_t level, QSeries::Exponent precision) {
  const auto& entry = find_entry(base_lattice_name(level));
  const Lattice l = entry.lattice();
  const auto data = level_data(level);
  if (l.dim() != static_cast<std::size_t>(2 * data.dN))
    raise(ErrorKind::Catalog, "base lattice " + entry.name + " has dimension " + std::to_string(l.dim()) +
                                  ", expected " + std::to_string(2 * data.dN));
  return theta_series(l, precision);
}

std::vector<BasisElement> modform_basis(std::int64_t level, std::int64_t weight, QSeries::Exponent precision) {
  if (weight < 0) raise(ErrorKind::Domain, "weight must be nonnegative");
  if (precision <= 0) raise(ErrorKind::Domain, "precision must be positive");
  const auto data = level_data(level);
  std::vector<BasisElement> out;
  const auto units = precision * QSeries::kDefaultDen;
  std::optional<QSeries> theta, delta;
  for (std::int64_t i = 0; data.kN * i <= weight; ++i) {
    const auto rest = weight - data.kN * i;
    if (rest % data.dN != 0) continue;
    if (!theta) theta = theta_base(level, precision);
    if (!delta) delta = delta_N(level, units);
    BasisElement b;
    b.delta_power = i;
    b.theta_power = rest / data.dN;
    b.series = (pow(*delta, static_cast<std::uint64_t>(i)) * pow(*theta, static_cast<std::uint64_t>(b.theta_power)))
                   .truncated(units);
    out.push_back(std::move(b));
  }
  return out;
}

ExtremalForm extremal_form(std::int64_t level, std::int64_t weight, QSeries::Exponent precision) {
  const auto data = level_data(level);
  ExtremalForm f;
  f.level = level;
  f.weight = weight;
  f.precision = precision;
  f.l = weight / data.kN;
  if (precision <= 2 * f.l + 2)
    raise(ErrorKind::Domain, "precision must exceed 2l+2 = " + std::to_string(2 * f.l + 2));
  const auto basis = modform_basis(level, weight, precision);
  if (basis.empty())
    raise(ErrorKind::Domain, "weight " + std::to_string(weight) + " is not k_N i + d_N j for level " +
                                 std::to_string(level));
  if (static_cast<std::int64_t>(basis.size()) != f.l + 1)
    raise(ErrorKind::InternalInconsistency, "basis size differs from floor(k/k_N) + 1");

  const auto units = precision * QSeries::kDefaultDen;
  QSeries acc(units);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto e = static_cast<QSeries::Exponent>(2 * i) * QSeries::kDefaultDen;
    const Rat lead = basis[i].series.coeff(e);
    if (lead == 0) raise(ErrorKind::InternalInconsistency, "basis element has no leading q^" + std::to_string(2 * i));
    const Rat target = i == 0 ? Rat(1) : Rat(0);
    Rat a = (target - acc.coeff(e)) / lead;
    a.canonicalize();
    f.coefficients.push_back(a);
    acc = acc + a * basis[i].series;
  }
  f.series = acc;
  const auto gap = (2 * f.l + 2) * QSeries::kDefaultDen;
  for (const auto& [e, c] : f.series.terms()) {
    if (e >= gap) break;
    if (e != 0) raise(ErrorKind::InternalInconsistency, "extremal form has a nonzero coefficient below q^(2l+2)");
  }
  if (f.series.coeff(0) != 1) raise(ErrorKind::InternalInconsistency, "extremal form does not start with 1");
  if (f.series.coeff(gap) <= 0)
    raise(ErrorKind::InternalInconsistency, "coefficient of q^" + std::to_string(2 * f.l + 2) + " is not positive");
  return f;
}

std::int64_t extremal_min_bound(std::int64_t level, std::int64_t weight) {
  return 2 + 2 * (weight / level_data(level).kN);
}

namespace {

// Shared preconditions for both extremality modes. Returns false and fills the
// report on failure.
bool modular_preconditions(const Lattice& lattice, std::int64_t level, const ModularCheckOptions& options,
                           CertReport& r) {
  const std::size_t n = lattice.dim();
  if (!is_admissible_level(level)) {
    r.verdict = Verdict::Fail;
    r.summary = "precondition: level " + std::to_string(level) + " is not admissible";
    return false;
  }
  const Rat det2 = lattice.det() * lattice.det();
  if (det2 != Rat(int_pow(level, n))) {
    r.verdict = Verdict::Fail;
    r.summary = "precondition: det " + lattice.det().get_str() + " is not N^(n/2) for N = " + std::to_string(level);
    return false;
  }
  ModularCheckOptions opt = options;
  opt.isometry = false;
  const auto mv = check_modular(lattice, opt);
  r.details["modularity_window"] = mv.window;
  for (const auto& d : mv.divisors) {
    if (!d.formal) {
      r.verdict = Verdict::Fail;
      r.summary = "precondition: not formally strongly modular (m = " + std::to_string(d.m) + ": " + d.reason + ")";
      r.details["divisor"] = d.m;
      if (d.first_difference) r.details["first_difference_q"] = *d.first_difference;
      return false;
    }
  }
  return true;
}

}  // namespace

CertReport check_extremal(const Lattice& lattice, const ModularCheckOptions& options) {
  const auto t0 = Clock::now();
  CertReport r;
  r.check = "check-extremal";
  const std::size_t n = lattice.dim();
  r.details["dim"] = n;
  r.details["det"] = lattice.det().get_str();
  auto done = [&]() -> CertReport {
    r.seconds = seconds_since(t0);
    return r;
  };
  if (!lattice.even()) {
    r.verdict = Verdict::Fail;
    r.summary = "precondition: lattice is not even integral";
    return done();
  }
  if (n % 2 != 0) {
    r.verdict = Verdict::Fail;
    r.summary = "precondition: odd dimension";
    return done();
  }
  const auto level_n = level(lattice);
  r.details["level"] = level_n;
  if (!modular_preconditions(lattice, level_n, options, r)) return done();

  const auto k = static_cast<std::int64_t>(n / 2);
  const auto bound = extremal_min_bound(level_n, k);
  const auto m = minimum(lattice, options.enumeration);
  r.details["min"] = m.min.get_str();
  r.details["kissing"] = m.count;
  r.details["bound"] = bound;
  if (m.min != bound) {
    r.verdict = Verdict::Fail;
    r.summary = "minimum " + m.min.get_str() + " differs from the extremal bound " + std::to_string(bound);
    return done();
  }
  const auto l = k / level_data(level_n).kN;
  const auto window = affordable_window(lattice, options.precision, options.vector_budget);
  r.details["theta_window"] = window;
  if (window <= 2 * l + 2) {
    r.verdict = Verdict::Inconclusive;
    r.summary = "minimum attains the bound but the affordable theta window q^" + std::to_string(window) +
                " does not reach q^" + std::to_string(2 * l + 3);
    r.details["hint"] = "raise the vector budget";
    return done();
  }
  const auto theta = theta_series(lattice, window, options.enumeration);
  const auto f = extremal_form(level_n, k, window);
  const auto cmp = compare(theta, f.series);
  if (!cmp.equal) {
    r.verdict = Verdict::Fail;
    const auto j = *cmp.first_difference / cmp.den;
    r.summary = "theta series differs from the extremal form at q^" + std::to_string(j);
    r.details["first_difference_q"] = j;
    return done();
  }
  r.verdict = Verdict::Pass;
  r.summary = "min " + m.min.get_str() + " = 2 + 2 floor(k/k_N); theta equals f_{" + std::to_string(level_n) + "," +
              std::to_string(k) + "} below q^" + std::to_string(window);
  r.details["theta"] = theta.to_string();
  return done();
}

CertReport check_extremal_odd(const Lattice& lattice, std::int64_t level_n, const ModularCheckOptions& options) {
  const auto t0 = Clock::now();
  CertReport r;
  r.check = "check-extremal-odd";
  r.details["dim"] = lattice.dim();
  r.details["det"] = lattice.det().get_str();
  r.details["level"] = level_n;
  auto done = [&]() -> CertReport {
    r.seconds = seconds_since(t0);
    return r;
  };
  if (!lattice.odd()) {
    r.verdict = Verdict::Fail;
    r.summary = "precondition: lattice is not odd integral";
    return done();
  }
  if (modular_level(lattice) != level_n) {
    r.verdict = Verdict::Fail;
    r.summary = "precondition: level is " + std::to_string(modular_level(lattice)) + ", not " + std::to_string(level_n);
    return done();
  }
  if (!modular_preconditions(lattice, level_n, options, r)) return done();
  const auto bound = odd_min_bound(level_n, static_cast<std::int64_t>(lattice.dim()));
  const auto m = minimum(lattice, options.enumeration);
  r.details["min"] = m.min.get_str();
  r.details["kissing"] = m.count;
  r.details["bound"] = bound;
  r.details["note"] = "rational equivalence to a power of C_N is not verified";
  if (m.min == bound) {
    r.verdict = Verdict::Pass;
    r.summary = "minimum " + m.min.get_str() + " attains the odd bound";
  } else {
    r.verdict = Verdict::Fail;
    r.summary = "minimum " + m.min.get_str() + (m.min > bound ? " exceeds" : " is below") + " the odd bound " +
                std::to_string(bound);
  }
  return done();
}

namespace {

struct SideEvaluation {
  ImagEvaluation eval;
  Rat bound;
  bool converged = false;
};

SideEvaluation evaluate_side(const Lattice& lattice, const Rat& t, double target, const EnumerationOptions& options) {
  const double min_norm = minimum(lattice, options).min.get_d();
  const Int d = common_denominator(lattice.gram());
  TailBound tail{static_cast<int>(lattice.dim()), min_norm, 1.0 / d.get_d()};
  SideEvaluation out;
  for (Rat b = 2; estimated_count(lattice, b.get_d()) < 2e7; b *= 2) {
    const QSeries s = theta_window(lattice, b, options);
    out.eval = eval_at_imag(s, t, tail);
    out.bound = b;
    if (out.eval.error() <= target) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

CertReport transformation_check(const Lattice& lattice, const Rat& t, double tolerance,
                                const EnumerationOptions& options) {
  const auto t0 = Clock::now();
  if (t <= 0) raise(ErrorKind::Domain, "t must be positive");
  CertReport r;
  r.check = "transformation";
  const double n = static_cast<double>(lattice.dim());
  const Lattice dl = dual(lattice);
  const Rat inv_t = 1 / t;
  const double factor = std::pow(t.get_d(), -0.5 * n) * std::sqrt(lattice.det().get_d());
  const auto lhs = evaluate_side(dl, t, tolerance / 8, options);
  const auto rhs = evaluate_side(lattice, inv_t, tolerance / (8 * std::max(factor, 1.0)), options);
  const double diff = std::fabs(lhs.eval.value - factor * rhs.eval.value);
  const double err = lhs.eval.error() + factor * rhs.eval.error();
  r.details["t"] = t.get_str();
  r.details["tolerance"] = tolerance;
  r.details["lhs"] = lhs.eval.value;
  r.details["rhs"] = factor * rhs.eval.value;
  r.details["difference"] = diff;
  r.details["error_bound"] = err;
  r.details["dual_norm_bound"] = lhs.bound.get_str();
  r.details["norm_bound"] = rhs.bound.get_str();
  if (diff + err <= tolerance) {
    r.verdict = Verdict::Pass;
    r.summary = "theta_{L*}(it) and t^(-n/2) sqrt(det) theta_L(i/t) agree within the tolerance";
  } else if (diff - err > tolerance) {
    r.verdict = Verdict::Fail;
    r.summary = "the two sides differ by more than the tolerance";
  } else {
    r.verdict = Verdict::Inconclusive;
    r.summary = "error bound too large for the tolerance";
    r.details["hint"] = "larger enumeration bounds are needed; the vector budget was reached";
  }
  r.seconds = seconds_since(t0);
  return r;
}

}  // namespace modlat
