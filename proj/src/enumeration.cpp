#include "modlat/enumeration.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "modlat/lll.hpp"

namespace modlat {

namespace {

Int to_mpz(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Int hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  Int lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  Int r = (hi << 64) + lo;
  return neg ? Int(-r) : r;
}

std::int64_t to_i64(const Int& v, const char* what) {
  if (!v.fits_slong_p()) raise(ErrorKind::ArithmeticOverflow, std::string(what) + " exceeds 64-bit range");
  return v.get_si();
}

Int floor_of(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace

CholeskyData exact_cholesky(const RatMatrix& g) {
  if (!g.square()) raise(ErrorKind::Shape, "Cholesky needs a square matrix");
  const std::size_t n = g.rows();
  // LDL^T with unit lower L; q(i,i) = D_i, q(i,j) = L(j,i).
  RatMatrix l = RatMatrix::identity(n);
  std::vector<Rat> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rat s = g(i, i);
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * l(i, k) * d[k];
    if (s <= 0) raise(ErrorKind::Definiteness, "Gram matrix is not positive definite");
    d[i] = s;
    for (std::size_t j = i + 1; j < n; ++j) {
      Rat t = g(j, i);
      for (std::size_t k = 0; k < i; ++k) t -= l(j, k) * l(i, k) * d[k];
      l(j, i) = t / d[i];
    }
  }
  CholeskyData c{RatMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    c.q(i, i) = d[i];
    for (std::size_t j = i + 1; j < n; ++j) c.q(i, j) = l(j, i);
  }
  return c;
}

CholeskyData exact_cholesky(const Lattice& lattice) { return exact_cholesky(lattice.gram()); }

RatMatrix reconstruct_gram(const CholeskyData& c) {
  const std::size_t n = c.q.rows();
  auto lower = [&](std::size_t i, std::size_t k) -> Rat {
    if (i == k) return 1;
    return i > k ? c.q(k, i) : Rat(0);
  };
  RatMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k <= std::min(i, j); ++k) g(i, j) += lower(i, k) * c.q(k, k) * lower(j, k);
  return g;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("MODLAT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void parallel_for_tasks(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = default_thread_count();
  if (threads <= 1 || count <= 1) {
    for (std::size_t t = 0; t < count; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= count) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t workers = std::min<std::size_t>(threads, count);
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

ShortVectorEnumerator::ShortVectorEnumerator(const RatMatrix& gram, const Rat& bound,
                                             const std::optional<std::vector<Rat>>& shift, bool use_lll)
    : n_(gram.rows()), bound_(bound) {
  if (!gram.square() || n_ == 0) raise(ErrorKind::Shape, "enumeration needs a nonempty square Gram matrix");
  if (bound < 0) raise(ErrorKind::Domain, "enumeration bound must be nonnegative");
  if (shift && shift->size() != n_) raise(ErrorKind::Shape, "shift length does not match the dimension");

  if (use_lll) {
    auto red = lll_reduce_gram(gram);
    transform_ = std::move(red.transform);
    reduced_ = std::move(red.gram);
  } else {
    transform_ = IntMatrix::identity(n_);
    reduced_ = gram;
  }
  const std::size_t n = n_;

  // Shift in reduced coordinates, split into an integer offset and a centred fraction.
  std::vector<Rat> frac(n, Rat(0));
  offset_.assign(n, 0);
  if (shift) {
    const RatMatrix tinv = to_rational(unimodular_inverse(transform_));
    for (std::size_t j = 0; j < n; ++j) {
      Rat s = 0;
      for (std::size_t i = 0; i < n; ++i) s += (*shift)[i] * tinv(i, j);
      const Int k = floor_of(s + Rat(1, 2));
      offset_[j] = to_i64(k, "shift offset");
      frac[j] = s - k;
    }
  }
  Int d = 1;
  for (const auto& f : frac) d = lcm(d, f.get_den());
  shift_den_ = to_i64(d, "shift denominator");
  shift_num_.resize(n);
  frac_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    shift_num_[i] = to_i64(Int(frac[i] * d), "shift numerator");
    frac_[i] = frac[i].get_d();
  }

  const Int gden = common_denominator(reduced_);
  const IntMatrix gi = integer_multiple(reduced_, gden);
  gi_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gi_[i * n + j] = to_i64(gi(i, j), "scaled Gram entry");
  scale_ = gden * d * d;
  bound_scaled_ = to_i64(floor_of(bound * scale_), "scaled bound");

  tmat_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) tmat_[i * n + j] = to_i64(transform_(i, j), "transform entry");

  const CholeskyData chol = exact_cholesky(reduced_);
  qdiag_.resize(n);
  qoff_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    qdiag_[i] = chol.q(i, i).get_d();
    for (std::size_t j = i + 1; j < n; ++j) qoff_[i * n + j] = chol.q(i, j).get_d();
  }
  bound_float_ = bound.get_d() * (1.0 + 1e-9) + 1e-9;

  // Coordinates of vectors in the ellipsoid satisfy |y_i| <= sqrt(bound * G^{-1}_ii).
  const RatMatrix ginv = inverse(reduced_);
  std::vector<double> vmax(n);
  for (std::size_t i = 0; i < n; ++i) {
    vmax[i] = static_cast<double>(shift_den_) * (std::sqrt(bound_float_ * ginv(i, i).get_d()) + 2.0);
    if (vmax[i] > 0x1p40) raise(ErrorKind::ArithmeticOverflow, "enumeration coordinates exceed the integer range");
  }
  for (std::size_t l = 0; l < n; ++l) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += std::fabs(static_cast<double>(gi_[l * n + j])) * vmax[j];
    if (s > 0x1p60) raise(ErrorKind::ArithmeticOverflow, "partial inner products exceed the integer range");
  }

  const double c = -frac_[n - 1];
  const double r = std::sqrt(bound_float_ / qdiag_[n - 1]) + 1e-9;
  const auto lo = static_cast<std::int64_t>(std::ceil(c - r));
  const auto hi = static_cast<std::int64_t>(std::floor(c + r));
  outer_lo_ = lo;
  tasks_ = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;
}

Rat ShortVectorEnumerator::norm_of(__int128 scaled) const {
  Rat r(to_mpz(scaled), scale_);
  r.canonicalize();
  return r;
}

void ShortVectorEnumerator::run_task(std::size_t task, const Visitor& visit) const {
  const std::size_t n = n_;
  const double bf = bound_float_;
  std::vector<std::int64_t> z(n, 0), hi(n, 0);
  std::vector<double> rho(n + 1, 0.0), tt(n, 0.0);
  std::vector<__int128> p(n + 1, 0);
  // w[i*n + l] = sum_{j >= i} gi(l, j) v_j for l < i; row n is zero.
  std::vector<std::int64_t> w((n + 1) * n, 0);

  std::size_t i = n - 1;
  z[i] = outer_lo_ + static_cast<std::int64_t>(task);
  hi[i] = z[i];
  while (true) {
    const double dev = static_cast<double>(z[i]) + frac_[i] + tt[i];
    rho[i] = rho[i + 1] + qdiag_[i] * dev * dev;
    if (rho[i] <= bf) {
      const std::int64_t v = shift_den_ * z[i] + shift_num_[i];
      const std::int64_t* wrow = &w[(i + 1) * n];
      p[i] = p[i + 1] + static_cast<__int128>(v) * (static_cast<__int128>(gi_[i * n + i]) * v + 2 * static_cast<__int128>(wrow[i]));
      if (i == 0) {
        if (p[0] <= bound_scaled_) visit(std::span<const std::int64_t>(z), p[0]);
      } else {
        std::int64_t* wcur = &w[i * n];
        for (std::size_t l = 0; l < i; ++l) wcur[l] = wrow[l] + gi_[l * n + i] * v;
        const std::size_t c = i - 1;
        double t = 0;
        for (std::size_t j = i; j < n; ++j) t += qoff_[c * n + j] * (static_cast<double>(z[j]) + frac_[j]);
        const double rem = bf - rho[i];
        const double centre = -frac_[c] - t;
        const double r = std::sqrt(rem / qdiag_[c]) + 1e-9;
        const auto lo = static_cast<std::int64_t>(std::ceil(centre - r));
        const auto up = static_cast<std::int64_t>(std::floor(centre + r));
        if (lo <= up) {
          i = c;
          tt[i] = t;
          z[i] = lo;
          hi[i] = up;
          continue;
        }
      }
    }
    while (true) {
      if (++z[i] <= hi[i]) break;
      z[i] = 0;
      if (++i == n) return;
    }
  }
}

void ShortVectorEnumerator::to_input(std::span<const std::int64_t> z, std::span<std::int64_t> x) const {
  const std::size_t n = n_;
  for (std::size_t j = 0; j < n; ++j) x[j] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t c = z[i] - offset_[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j < n; ++j) x[j] += c * tmat_[i * n + j];
  }
}

std::pair<std::vector<Rat>, Rat> ShortVectorEnumerator::reduced_form(const std::vector<Rat>& v) const {
  if (v.size() != n_) raise(ErrorKind::Shape, "linear form length does not match the dimension");
  std::vector<Rat> w(n_, Rat(0));
  Rat c = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) w[i] += transform_(i, j) * v[j];
    c += offset_[i] * w[i];
  }
  return {w, c};
}

EnumerationResult enumerate(const RatMatrix& gram, const Rat& bound, const std::optional<std::vector<Rat>>& shift,
                            bool collect, const EnumerationOptions& options) {
  const ShortVectorEnumerator e(gram, bound, shift, options.lll);
  const std::size_t n = e.dim();
  struct TaskOut {
    std::map<__int128, std::uint64_t> counts;
    std::map<__int128, std::vector<CoordRow>> vectors;
  };
  std::vector<TaskOut> outs(e.task_count());
  std::atomic<std::size_t> collected{0};
  std::atomic<bool> over{false};
  const std::size_t limit = options.collect_limit;

  parallel_for_tasks(e.task_count(), options.threads, [&](std::size_t t) {
    TaskOut& out = outs[t];
    // Consecutive leaves usually share a norm; cache the last map slot.
    __int128 last_norm = -1;
    std::uint64_t* last_slot = nullptr;
    e.run_task(t, [&](std::span<const std::int64_t> z, __int128 norm) {
      if (norm != last_norm || !last_slot) {
        last_slot = &out.counts[norm];
        last_norm = norm;
      }
      ++*last_slot;
      if (!collect || over.load(std::memory_order_relaxed)) return;
      if (collected.fetch_add(1, std::memory_order_relaxed) >= limit) {
        over = true;
        return;
      }
      CoordRow x(n);
      e.to_input(z, x);
      out.vectors[norm].push_back(std::move(x));
    });
  });

  EnumerationResult result;
  result.theta.bound = bound;
  std::map<__int128, std::uint64_t> merged;
  for (const auto& out : outs)
    for (const auto& [norm, c] : out.counts) merged[norm] += c;
  for (const auto& [norm, c] : merged) result.theta.counts.emplace(e.norm_of(norm), c);

  if (over) {
    std::uint64_t total = 0;
    for (const auto& [norm, c] : merged) total += c;
    throw CapacityError("collecting " + std::to_string(total) + " vectors exceeds the limit of " +
                            std::to_string(limit),
                        result.theta);
  }
  if (collect) {
    for (const auto& [norm, c] : merged) {
      VectorLayer layer;
      layer.norm = e.norm_of(norm);
      layer.vectors.reserve(c);
      for (auto& out : outs) {
        auto it = out.vectors.find(norm);
        if (it == out.vectors.end()) continue;
        for (auto& row : it->second) layer.vectors.push_back(std::move(row));
        it->second.clear();
      }
      result.layers.push_back(std::move(layer));
    }
  }
  return result;
}

EnumerationResult enumerate(const Lattice& lattice, const Rat& bound, const std::optional<std::vector<Rat>>& shift,
                            bool collect, const EnumerationOptions& options) {
  return enumerate(lattice.gram(), bound, shift, collect, options);
}

namespace {

Rat first_bound(const Lattice& lattice, const EnumerationOptions& options) {
  const RatMatrix g = options.lll ? lll_reduce_gram(lattice.gram()).gram : lattice.gram();
  Rat b = g(0, 0);
  for (std::size_t i = 1; i < g.rows(); ++i) b = std::min(b, g(i, i));
  return b;
}

}  // namespace

MinimumResult minimum(const Lattice& lattice, const EnumerationOptions& options) {
  const auto res = enumerate(lattice, first_bound(lattice, options), std::nullopt, false, options);
  for (const auto& [norm, c] : res.theta.counts)
    if (norm > 0) return {norm, c};
  raise(ErrorKind::InternalInconsistency, "no nonzero vector within the first basis norm");
}

VectorLayer minimal_vectors(const Lattice& lattice, const EnumerationOptions& options) {
  auto res = enumerate(lattice, first_bound(lattice, options), std::nullopt, true, options);
  for (auto& layer : res.layers)
    if (layer.norm > 0) return std::move(layer);
  raise(ErrorKind::InternalInconsistency, "no nonzero vector within the first basis norm");
}

MinimumResult coset_minimum(const Lattice& lattice, const std::vector<Rat>& shift, const EnumerationOptions& options) {
  if (shift.size() != lattice.dim()) raise(ErrorKind::Shape, "shift length does not match the dimension");
  // The centred representative of the shift in reduced coordinates gives a first upper bound.
  LllResult red{lattice.gram(), IntMatrix::identity(lattice.dim())};
  if (options.lll) red = lll_reduce_gram(lattice.gram());
  const RatMatrix tinv = to_rational(unimodular_inverse(red.transform));
  const std::size_t n = lattice.dim();
  std::vector<Rat> f(n, Rat(0));
  for (std::size_t j = 0; j < n; ++j) {
    Rat s = 0;
    for (std::size_t i = 0; i < n; ++i) s += shift[i] * tinv(i, j);
    f[j] = s - floor_of(s + Rat(1, 2));
  }
  Rat b = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b += f[i] * red.gram(i, j) * f[j];
  const auto res = enumerate(lattice, b, shift, false, options);
  if (res.theta.counts.empty()) raise(ErrorKind::InternalInconsistency, "coset enumeration found no vector");
  const auto& [norm, c] = *res.theta.counts.begin();
  return {norm, c};
}

QSeries counts_to_series(const ThetaCounts& counts, QSeries::Exponent den, const Rat& next_unknown) {
  const Rat p = next_unknown * den;
  if (p.get_den() != 1) raise(ErrorKind::Granularity, "series precision is not a whole number of units");
  QSeries s(to_i64(p.get_num(), "series precision"), den);
  for (const auto& [norm, c] : counts.counts) {
    const Rat e = norm * den;
    if (e.get_den() != 1) raise(ErrorKind::Granularity, "norm " + norm.get_str() + " is not a multiple of the unit");
    s.add_term(to_i64(e.get_num(), "series exponent"), Rat(static_cast<unsigned long>(c)));
  }
  return s;
}

QSeries theta_window(const Lattice& lattice, const Rat& bound, const EnumerationOptions& options) {
  const auto res = enumerate(lattice, bound, std::nullopt, false, options);
  const Int d = common_denominator(lattice.gram());
  Rat next;
  if (lattice.even()) {
    Int m = floor_of(bound) + 1;
    if (m % 2 != 0) m += 1;
    next = m;
  } else {
    next = Rat(floor_of(bound * d) + 1, d);
    next.canonicalize();
  }
  return counts_to_series(res.theta, 12 * to_i64(d, "norm denominator"), next);
}

QSeries theta_series(const Lattice& lattice, QSeries::Exponent precision_in_q, const EnumerationOptions& options) {
  if (!lattice.integral()) raise(ErrorKind::Parity, "theta_series needs an integral lattice; use theta_window");
  if (precision_in_q <= 0) raise(ErrorKind::Domain, "precision must be positive");
  return theta_window(lattice, Rat(precision_in_q - 1), options).truncated(precision_in_q * QSeries::kDefaultDen);
}

}  // namespace modlat
