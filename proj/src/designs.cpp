#include "modlat/designs.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "modlat/errors.hpp"

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

Int ipow(const Int& b, std::int64_t e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

Rat rpow(const Rat& b, std::int64_t e) {
  Rat r(ipow(b.get_num(), e), ipow(b.get_den(), e));
  r.canonicalize();
  return r;
}

// Exact sum that stays in 128 bits until it cannot.
struct Accumulator {
  __int128 small = 0;
  Int big;

  void add(__int128 t) {
    __int128 r;
    if (__builtin_add_overflow(small, t, &r)) {
      big += to_mpz(small);
      small = t;
    } else {
      small = r;
    }
  }
  void add_big(const Int& t) { big += t; }
  void merge(const Accumulator& o) {
    big += o.big;
    add(o.small);
  }
  Int value() const { return big + to_mpz(small); }
};

// Adds s^p for p = 0..powers.size()-1.
void add_powers(std::int64_t s, std::vector<Accumulator>& acc) {
  __int128 p = 1;
  bool overflow = false;
  Int pb;
  for (std::size_t e = 0; e < acc.size(); ++e) {
    if (!overflow) {
      acc[e].add(p);
      __int128 next;
      if (__builtin_mul_overflow(p, static_cast<__int128>(s), &next)) {
        overflow = true;
        pb = to_mpz(p) * s;
      } else {
        p = next;
      }
    } else {
      acc[e].add_big(pb);
      pb *= s;
    }
  }
}

// Integer Gram D*G with D the common denominator.
struct ScaledGram {
  Int d;
  std::vector<std::int64_t> g;  // row-major
  std::size_t n = 0;

  explicit ScaledGram(const Lattice& lattice) : n(lattice.dim()) {
    d = common_denominator(lattice.gram());
    const IntMatrix gi = integer_multiple(lattice.gram(), d);
    g.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i * n + j] = to_i64(gi(i, j), "scaled Gram entry");
  }

  Int form(const std::vector<std::int64_t>& a) const {
    Int r = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r += Int(a[i]) * g[i * n + j] * a[j];
    return r;
  }
};

// y = x (D G), integral dual coordinates of every layer vector.
std::vector<std::vector<std::int64_t>> dual_coords(const ScaledGram& sg, const std::vector<CoordRow>& xs) {
  std::vector<std::vector<std::int64_t>> ys;
  ys.reserve(xs.size());
  const std::size_t n = sg.n;
  for (const auto& x : xs) {
    if (x.size() != n) raise(ErrorKind::Shape, "layer vector has wrong length");
    std::vector<std::int64_t> y(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      __int128 s = 0;
      for (std::size_t i = 0; i < n; ++i) s += static_cast<__int128>(x[i]) * sg.g[i * n + j];
      if (s > INT64_MAX / 4 || s < -(INT64_MAX / 4)) raise(ErrorKind::ArithmeticOverflow, "dual coordinate too large");
      y[j] = static_cast<std::int64_t>(s);
    }
    ys.push_back(std::move(y));
  }
  return ys;
}

// Keeps one of x, -x when the layer is centrally symmetric; weight 2 then.
std::pair<std::vector<CoordRow>, int> half_layer(const std::vector<CoordRow>& xs) {
  std::vector<CoordRow> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  std::vector<CoordRow> half;
  bool symmetric = true;
  for (const auto& x : xs) {
    CoordRow neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    if (!std::binary_search(sorted.begin(), sorted.end(), neg) || neg == x) {
      symmetric = false;
      break;
    }
    auto nz = std::find_if(x.begin(), x.end(), [](std::int64_t v) { return v != 0; });
    if (*nz > 0) half.push_back(x);
  }
  if (!symmetric) return {xs, 1};
  return {std::move(half), 2};
}

void require_layer(const VectorLayer& layer, std::size_t n) {
  if (layer.vectors.empty()) raise(ErrorKind::Domain, "empty layer");
  if (!layer.complete) raise(ErrorKind::Domain, "layer is incomplete");
  for (const auto& x : layer.vectors)
    if (x.size() != n) raise(ErrorKind::Shape, "layer vector has wrong length");
}

void require_degree(int degree) {
  if (degree <= 0 || degree % 2 != 0) raise(ErrorKind::Parameter, "design degrees must be positive and even");
}

nlohmann::json row_json(const std::vector<std::int64_t>& v) { return nlohmann::json(v); }

// Nondecreasing index tuples of length d over [0, n), in lexicographic order.
class TupleIndex {
 public:
  TupleIndex(std::size_t n, std::size_t d) : n_(n), d_(d), table_((d + 1) * (n + 1), 0) {
    // table(r, s) = number of nondecreasing r-tuples with entries in [s, n)
    for (std::size_t s = 0; s <= n; ++s) table(0, s) = 1;
    for (std::size_t r = 1; r <= d; ++r) {
      table(r, n) = 0;
      for (std::size_t s = n; s-- > 0;) table(r, s) = table(r - 1, s) + table(r, s + 1);
    }
  }
  std::size_t size() const { return d_ == 0 ? 1 : table_at(d_, 0); }
  std::size_t rank(const std::vector<std::size_t>& t) const {
    std::size_t r = 0, prev = 0;
    for (std::size_t pos = 0; pos < d_; ++pos) {
      for (std::size_t v = prev; v < t[pos]; ++v) r += table_at(d_ - pos - 1, v);
      prev = t[pos];
    }
    return r;
  }
  // All tuples in rank order.
  std::vector<std::vector<std::size_t>> all() const {
    std::vector<std::vector<std::size_t>> out;
    out.reserve(size());
    std::vector<std::size_t> t(d_, 0);
    if (d_ == 0) {
      out.push_back(t);
      return out;
    }
    while (true) {
      out.push_back(t);
      std::size_t pos = d_;
      while (pos > 0 && t[pos - 1] == n_ - 1) --pos;
      if (pos == 0) break;
      const std::size_t v = t[pos - 1] + 1;
      for (std::size_t i = pos - 1; i < d_; ++i) t[i] = v;
    }
    return out;
  }

 private:
  std::size_t& table(std::size_t r, std::size_t s) { return table_[r * (n_ + 1) + s]; }
  std::size_t table_at(std::size_t r, std::size_t s) const { return table_[r * (n_ + 1) + s]; }
  std::size_t n_, d_;
  std::vector<std::size_t> table_;
};

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  long double r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (r > static_cast<long double>(cap) * 2) return cap * 2 + 1;
  }
  return static_cast<std::size_t>(r + 0.5L);
}

// Dense symmetric polynomial of fixed degree, coefficients indexed by tuple rank.
struct SymPoly {
  std::size_t degree = 0;
  std::vector<Int> coeffs;
};

SymPoly multiply(const SymPoly& a, const SymPoly& b, std::size_t n) {
  const TupleIndex ia(n, a.degree), ib(n, b.degree), ic(n, a.degree + b.degree);
  const auto ta = ia.all();
  const auto tb = ib.all();
  SymPoly c{a.degree + b.degree, std::vector<Int>(ic.size(), Int(0))};
  std::vector<std::size_t> merged(c.degree);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < tb.size(); ++j) {
      if (b.coeffs[j] == 0) continue;
      std::merge(ta[i].begin(), ta[i].end(), tb[j].begin(), tb[j].end(), merged.begin());
      c.coeffs[ic.rank(merged)] += a.coeffs[i] * b.coeffs[j];
    }
  }
  return c;
}

// Block sizes for skipping zero prefixes.
struct BlockSizes {
  std::size_t n;
  std::vector<std::size_t> t;  // t[r*(n+1)+s]
  BlockSizes(std::size_t n_, std::size_t d) : n(n_), t((d + 1) * (n_ + 1), 0) {
    for (std::size_t s = 0; s <= n; ++s) t[s] = 1;
    for (std::size_t r = 1; r <= d; ++r)
      for (std::size_t s = n; s-- > 0;) t[r * (n + 1) + s] = t[(r - 1) * (n + 1) + s] + t[r * (n + 1) + s + 1];
  }
  std::size_t size_from(std::size_t r, std::size_t s) const { return t[r * (n + 1) + s]; }
};

template <class Acc>
void tensor_accumulate(const std::vector<std::int64_t>& y, std::size_t start, std::size_t depth, Acc prod,
                       std::vector<Acc>& acc, std::size_t& idx, const BlockSizes& index) {
  const std::size_t n = y.size();
  if (depth == 1) {
    for (std::size_t i = start; i < n; ++i) acc[idx++] += prod * static_cast<Acc>(y[i]);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    const Acc p = prod * static_cast<Acc>(y[i]);
    if (p == 0) {
      idx += index.size_from(depth - 1, i);
      continue;
    }
    tensor_accumulate(y, i, depth - 1, p, acc, idx, index);
  }
}

template <class Acc>
std::vector<Int> moment_tensor(const std::vector<std::vector<std::int64_t>>& ys, std::size_t n, std::size_t degree,
                               std::size_t size) {
  const BlockSizes blocks(n, degree);
  std::vector<Acc> acc(size, 0);
  for (const auto& y : ys) {
    std::size_t idx = 0;
    tensor_accumulate<Acc>(y, 0, degree, Acc(1), acc, idx, blocks);
  }
  std::vector<Int> out(size);
  for (std::size_t i = 0; i < size; ++i) {
    if constexpr (std::is_same_v<Acc, __int128>)
      out[i] = to_mpz(acc[i]);
    else
      out[i] = Int(static_cast<long>(acc[i]));
  }
  return out;
}

Int factorial(std::size_t k) {
  Int r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

Int multinomial(const std::vector<std::size_t>& tuple) {
  Int r = factorial(tuple.size());
  for (std::size_t i = 0; i < tuple.size();) {
    std::size_t j = i;
    while (j < tuple.size() && tuple[j] == tuple[i]) ++j;
    r /= factorial(j - i);
    i = j;
  }
  return r;
}

CertReport make_report(const std::string& check) {
  CertReport r;
  r.check = check;
  return r;
}

}  // namespace

Rat design_constant(std::int64_t n, std::int64_t k, const Int& count, const Rat& m) {
  if (n < 1 || k < 1) raise(ErrorKind::Parameter, "design_constant needs n >= 1 and k >= 1");
  Rat c(count);
  c *= rpow(m, k);
  for (std::int64_t i = 0; i < k; ++i) {
    c *= Rat(2 * i + 1);
    c /= Rat(n + 2 * i);
  }
  c.canonicalize();
  return c;
}

DesignStrategy DesignTestConfig::strategy_for(int degree) const {
  auto it = strategy.find(degree);
  if (it != strategy.end()) return it->second;
  return degree <= 6 ? DesignStrategy::MomentTensor : DesignStrategy::RandomWitness;
}

std::vector<std::vector<std::int64_t>> witness_directions(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n == 0) raise(ErrorKind::Shape, "dimension must be positive");
  if (count == 0) raise(ErrorKind::Parameter, "need at least one witness");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(-9, 9);
  std::set<std::vector<std::int64_t>> seen;
  std::vector<std::vector<std::int64_t>> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > count * 1000 + 1000) raise(ErrorKind::Parameter, "cannot draw that many distinct witnesses");
    std::vector<std::int64_t> a(n);
    for (auto& v : a) v = coord(rng);
    if (std::all_of(a.begin(), a.end(), [](std::int64_t v) { return v == 0; })) continue;
    if (!seen.insert(a).second) continue;
    out.push_back(std::move(a));
  }
  return out;
}

CertReport power_sum_design_test(const Lattice& lattice, const VectorLayer& layer, const std::vector<int>& degrees,
                                 std::size_t witnesses, std::uint64_t seed) {
  const std::size_t n = lattice.dim();
  require_layer(layer, n);
  for (int d : degrees) require_degree(d);
  CertReport rep = make_report("power-sum-design");
  const ScaledGram sg(lattice);
  const auto [half, weight] = half_layer(layer.vectors);
  const auto ys = dual_coords(sg, half);
  const auto alphas = witness_directions(n, witnesses, seed);
  const int maxdeg = degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
  const Int count(static_cast<unsigned long>(layer.vectors.size()));

  rep.details["norm"] = layer.norm.get_str();
  rep.details["size"] = layer.vectors.size();
  rep.details["degrees"] = degrees;
  rep.details["witnesses"] = witnesses;
  rep.details["seed"] = seed;

  for (const auto& a : alphas) {
    std::vector<Accumulator> acc(static_cast<std::size_t>(maxdeg) + 1);
    for (const auto& y : ys) {
      __int128 s = 0;
      for (std::size_t i = 0; i < n; ++i) s += static_cast<__int128>(a[i]) * y[i];
      if (s > INT64_MAX || s < INT64_MIN) raise(ErrorKind::ArithmeticOverflow, "inner product too large");
      add_powers(static_cast<std::int64_t>(s), acc);
    }
    const Int qa = sg.form(a);
    for (int deg : degrees) {
      const std::int64_t k = deg / 2;
      // sum (a.y)^(2k) = c D^k (a Gi a)^k with y = x Gi, Gi = D G
      const Int lhs = acc[static_cast<std::size_t>(deg)].value() * weight;
      const Rat rhs = design_constant(static_cast<std::int64_t>(n), k, count, layer.norm) * Rat(ipow(sg.d, k)) *
                      Rat(ipow(qa, k));
      if (Rat(lhs) != rhs) {
        rep.verdict = Verdict::Fail;
        rep.summary = "degree " + std::to_string(deg) + " identity fails for a witness direction";
        rep.details["failure"] = {{"degree", deg},
                                  {"witness", row_json(a)},
                                  {"lhs", Rat(Rat(lhs) / Rat(ipow(sg.d, deg))).get_str()},
                                  {"rhs", Rat(rhs / Rat(ipow(sg.d, deg))).get_str()}};
        return rep;
      }
    }
  }
  rep.verdict = Verdict::Pass;
  rep.summary = "identity holds on " + std::to_string(witnesses) + " witnesses (seed " + std::to_string(seed) + ")";
  rep.details["evidence"] = "witness";
  return rep;
}

CertReport moment_tensor_test(const Lattice& lattice, const VectorLayer& layer, int degree, std::size_t tensor_cap) {
  const std::size_t n = lattice.dim();
  require_layer(layer, n);
  require_degree(degree);
  if (degree > 6) raise(ErrorKind::Parameter, "moment tensors are only built for degree <= 6");
  const std::size_t d = static_cast<std::size_t>(degree);
  const std::size_t comps = binomial_capped(n + d - 1, d, tensor_cap);
  if (comps > tensor_cap)
    raise(ErrorKind::Capacity, "symmetric tensor of degree " + std::to_string(degree) + " in dimension " +
                                   std::to_string(n) + " exceeds " + std::to_string(tensor_cap) + " components");
  CertReport rep = make_report("moment-tensor");
  rep.details["norm"] = layer.norm.get_str();
  rep.details["size"] = layer.vectors.size();
  rep.details["degree"] = degree;
  rep.details["components"] = comps;

  const ScaledGram sg(lattice);
  const auto [half, weight] = half_layer(layer.vectors);
  const auto ys = dual_coords(sg, half);
  std::int64_t maxabs = 0;
  for (const auto& y : ys)
    for (auto v : y) maxabs = std::max<std::int64_t>(maxabs, v < 0 ? -v : v);
  const long double worst = std::pow(static_cast<long double>(maxabs), degree) * static_cast<long double>(ys.size());
  std::vector<Int> tensor;
  if (worst < 4.0e18L)
    tensor = moment_tensor<std::int64_t>(ys, n, d, comps);
  else if (worst < 1.0e37L)
    tensor = moment_tensor<__int128>(ys, n, d, comps);
  else
    raise(ErrorKind::ArithmeticOverflow, "moment tensor entries exceed 128 bits");

  // Q(a) = a Gi a as a degree-2 symmetric polynomial, then Q^k.
  SymPoly q{2, std::vector<Int>(TupleIndex(n, 2).size(), Int(0))};
  {
    const TupleIndex i2(n, 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) q.coeffs[i2.rank({i, j})] = Int(sg.g[i * n + j]) * (i == j ? 1 : 2);
  }
  SymPoly qk = q;
  for (std::size_t k = 2; k <= d / 2; ++k) qk = multiply(qk, q, n);

  const std::int64_t k = degree / 2;
  const Rat c = design_constant(static_cast<std::int64_t>(n), k, Int(static_cast<unsigned long>(layer.vectors.size())),
                                layer.norm) *
                Rat(ipow(sg.d, k));
  const TupleIndex idx(n, d);
  const auto tuples = idx.all();
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const Int lhs = multinomial(tuples[i]) * tensor[i] * weight;
    const Rat rhs = c * Rat(qk.coeffs[i]);
    if (Rat(lhs) != rhs) {
      rep.verdict = Verdict::Fail;
      rep.summary = "degree " + std::to_string(degree) + " moment tensor differs from the metric power";
      std::vector<std::size_t> t = tuples[i];
      rep.details["failure"] = {{"component", t}, {"lhs", lhs.get_str()}, {"rhs", rhs.get_str()}};
      return rep;
    }
  }
  rep.verdict = Verdict::Pass;
  rep.summary = "degree " + std::to_string(degree) + " moment identity holds for every direction";
  rep.details["evidence"] = "proof";
  return rep;
}

CertReport design_test(const Lattice& lattice, const VectorLayer& layer, const DesignTestConfig& config) {
  if (config.witnesses == 0) raise(ErrorKind::Parameter, "need at least one witness");
  CertReport rep = make_report("design");
  rep.details["norm"] = layer.norm.get_str();
  rep.details["size"] = layer.vectors.size();
  rep.details["seed"] = config.seed;
  rep.details["witnesses"] = config.witnesses;
  nlohmann::json per = nlohmann::json::array();
  std::vector<int> proven, witnessed;
  for (int deg : config.degrees) {
    require_degree(deg);
    const auto strat = config.strategy_for(deg);
    CertReport r = strat == DesignStrategy::MomentTensor
                       ? moment_tensor_test(lattice, layer, deg, config.tensor_cap)
                       : power_sum_design_test(lattice, layer, {deg}, config.witnesses, config.seed);
    nlohmann::json e = {{"degree", deg},
                        {"strategy", strat == DesignStrategy::MomentTensor ? "moment-tensor" : "witness"},
                        {"verdict", to_string(r.verdict)}};
    if (r.details.contains("failure")) e["failure"] = r.details["failure"];
    per.push_back(e);
    if (!r.passed()) {
      rep.details["degrees"] = per;
      rep.verdict = Verdict::Fail;
      rep.summary = "not a design in degree " + std::to_string(deg) + ": " + r.summary;
      return rep;
    }
    (strat == DesignStrategy::MomentTensor ? proven : witnessed).push_back(deg);
  }
  rep.details["degrees"] = per;
  rep.verdict = Verdict::Pass;
  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (int d : v) s += (s.empty() ? "" : ",") + std::to_string(d);
    return s;
  };
  std::string summary;
  if (!proven.empty()) summary += "degrees " + list(proven) + " proven by moment tensors";
  if (!witnessed.empty())
    summary += std::string(summary.empty() ? "" : "; ") + "degrees " + list(witnessed) + " exact on " +
               std::to_string(config.witnesses) + " witnesses (seed " + std::to_string(config.seed) + ")";
  rep.summary = summary;
  return rep;
}

CertReport is_strongly_perfect(const Lattice& lattice, const EnumerationOptions& options) {
  const VectorLayer min = minimal_vectors(lattice, options);
  CertReport rep = make_report("strongly-perfect");
  rep.details["min"] = min.norm.get_str();
  rep.details["kissing"] = min.vectors.size();
  for (int deg : {2, 4}) {
    const CertReport r = moment_tensor_test(lattice, min, deg);
    if (!r.passed()) {
      rep.verdict = Verdict::Fail;
      rep.summary = "minimal vectors are not a 4-design (degree " + std::to_string(deg) + " fails)";
      rep.details["failure"] = r.details["failure"];
      rep.details["degree"] = deg;
      return rep;
    }
  }
  rep.verdict = Verdict::Pass;
  rep.summary = "minimal vectors form a spherical 4-design";
  return rep;
}

std::size_t perfection_rank(const VectorLayer& layer) {
  if (layer.vectors.empty()) return 0;
  const std::size_t n = layer.vectors.front().size();
  const std::size_t m = n * (n + 1) / 2;
  const auto [half, weight] = half_layer(layer.vectors);
  (void)weight;
  // Echelon rows with their pivot columns.
  std::vector<std::vector<Int>> rows;
  std::vector<std::size_t> pivots;
  for (const auto& x : half) {
    if (rows.size() == m) break;
    std::vector<Int> v(m);
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) v[c++] = Int(x[i]) * x[j];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::size_t p = pivots[r];
      if (v[p] == 0) continue;
      const Int a = rows[r][p], b = v[p];
      Int g = 0;
      for (std::size_t col = 0; col < m; ++col) {
        v[col] = a * v[col] - b * rows[r][col];
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[col].get_mpz_t());
      }
      if (g > 1)
        for (auto& e : v) e /= g;
    }
    auto nz = std::find_if(v.begin(), v.end(), [](const Int& e) { return e != 0; });
    if (nz == v.end()) continue;
    pivots.push_back(static_cast<std::size_t>(nz - v.begin()));
    rows.push_back(std::move(v));
  }
  return rows.size();
}

std::size_t perfection_rank(const Lattice& lattice, const EnumerationOptions& options) {
  return perfection_rank(minimal_vectors(lattice, options));
}

const char* to_string(EutaxyKind k) noexcept {
  switch (k) {
    case EutaxyKind::StronglyEutactic: return "strongly-eutactic";
    case EutaxyKind::EutacticWithCertificate: return "eutactic-with-certificate";
    case EutaxyKind::NoCertificateFound: return "no-certificate-found";
    case EutaxyKind::Disproved: return "disproved";
  }
  return "?";
}

EutaxyReport eutaxy_check(const Lattice& lattice, const EnumerationOptions& options) {
  const std::size_t n = lattice.dim();
  const VectorLayer min = minimal_vectors(lattice, options);
  const RatMatrix ginv = inverse(lattice.gram());
  EutaxyReport out;
  out.report = make_report("eutaxy");
  auto& rep = out.report;
  rep.details["min"] = min.norm.get_str();
  rep.details["kissing"] = min.vectors.size();

  // Identity in basis coordinates: sum lambda_x x^T x = G^{-1}.
  IntMatrix s(n, n, Int(0));
  for (const auto& x : min.vectors)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s(i, j) += Int(x[i]) * x[j];
  const Rat factor = min.norm * Rat(Int(static_cast<unsigned long>(min.vectors.size()))) / Rat(static_cast<long>(n));
  bool equal = true;
  for (std::size_t i = 0; i < n && equal; ++i)
    for (std::size_t j = 0; j < n && equal; ++j) equal = Rat(s(i, j)) == factor * ginv(i, j);
  if (equal) {
    Rat lambda = 1 / factor;
    lambda.canonicalize();
    out.kind = EutaxyKind::StronglyEutactic;
    out.lambda = lambda;
    rep.verdict = Verdict::Pass;
    rep.summary = "strongly eutactic with common coefficient " + lambda.get_str();
    rep.details["kind"] = to_string(out.kind);
    rep.details["lambda"] = lambda.get_str();
    return out;
  }

  // General case: one unknown per pair +-x, exact elimination.
  const auto [half, weight] = half_layer(min.vectors);
  (void)weight;
  const std::size_t m = n * (n + 1) / 2;
  const std::size_t cols = half.size();
  constexpr std::size_t kMaxUnknowns = 4000;
  if (cols > kMaxUnknowns) {
    out.kind = EutaxyKind::NoCertificateFound;
    rep.verdict = Verdict::Inconclusive;
    rep.summary = "equal coefficients fail and the system is too large to search";
    rep.details["kind"] = to_string(out.kind);
    return out;
  }
  std::vector<std::vector<Rat>> a(m, std::vector<Rat>(cols + 1, Rat(0)));
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) a[r++][c] = Rat(half[c][i] * half[c][j]);
  }
  {
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) a[r++][cols] = ginv(i, j);
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m; ++c) {
    std::size_t p = row;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[row]);
    const Rat inv = 1 / a[row][c];
    for (auto& e : a[row]) e *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || a[r][c] == 0) continue;
      const Rat f = a[r][c];
      for (std::size_t cc = c; cc <= cols; ++cc) a[r][cc] -= f * a[row][cc];
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < m; ++r)
    if (a[r][cols] != 0) {
      out.kind = EutaxyKind::Disproved;
      rep.verdict = Verdict::Fail;
      rep.summary = "the identity is not in the span of the minimal projections";
      rep.details["kind"] = to_string(out.kind);
      return out;
    }
  // One-parameter screening: every free unknown equals t > 0.
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::optional<Rat> lo = Rat(0), hi;
  bool feasible = true;
  for (std::size_t r = 0; r < row; ++r) {
    const Rat beta = a[r][cols];
    Rat gamma = 0;
    for (std::size_t c = 0; c < cols; ++c)
      if (!is_pivot[c]) gamma += a[r][c];
    // lambda_pivot = beta - t * gamma > 0
    if (gamma == 0) {
      if (beta <= 0) feasible = false;
    } else if (gamma > 0) {
      const Rat b = beta / gamma;
      if (!hi || b < *hi) hi = b;
    } else {
      const Rat b = beta / gamma;
      if (b > *lo) lo = b;
    }
  }
  const bool has_free = row < cols;
  if (feasible && hi && *hi <= *lo) feasible = false;
  if (feasible) {
    Rat t = hi ? Rat((*lo + *hi) / 2) : Rat(*lo + 1);
    if (!has_free) t = 0;
    std::vector<Rat> lambda(cols, t);
    for (std::size_t r = 0; r < row; ++r) {
      Rat g = 0;
      for (std::size_t c = 0; c < cols; ++c)
        if (!is_pivot[c]) g += a[r][c];
      lambda[pivot_col[r]] = a[r][cols] - t * g;
    }
    bool positive = std::all_of(lambda.begin(), lambda.end(), [](const Rat& v) { return v > 0; });
    if (positive) {
      // Recheck the certificate directly.
      RatMatrix sum(n, n, Rat(0));
      for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) sum(i, j) += lambda[c] * half[c][i] * half[c][j];
      if (!(sum == ginv)) raise(ErrorKind::InternalInconsistency, "eutaxy certificate does not verify");
      out.kind = EutaxyKind::EutacticWithCertificate;
      rep.verdict = Verdict::Pass;
      rep.summary = "eutactic with a positive certificate";
      rep.details["kind"] = to_string(out.kind);
      nlohmann::json cert = nlohmann::json::array();
      // each pair +-x shares lambda/2 in the full sum
      for (std::size_t c = 0; c < cols; ++c) cert.push_back({{"vector", half[c]}, {"lambda", Rat(lambda[c] / 2).get_str()}});
      rep.details["certificate"] = cert;
      return out;
    }
  }
  out.kind = EutaxyKind::NoCertificateFound;
  rep.verdict = Verdict::Inconclusive;
  rep.summary = "equal coefficients fail and no positive solution was found";
  rep.details["kind"] = to_string(out.kind);
  return out;
}

Rat min_product_threshold(std::int64_t n) {
  Rat r(n + 2, 3);
  r.canonicalize();
  return r;
}

std::int64_t unimodular_min_bound(std::int64_t n) {
  if (n < 1) raise(ErrorKind::Domain, "dimension must be positive");
  const Rat t = min_product_threshold(n);
  std::int64_t m = 2;
  while (Rat(m * m) < t) m += 2;
  return m;
}

CertReport min_product_check(const Lattice& lattice, const EnumerationOptions& options) {
  const auto m = minimum(lattice, options);
  const auto md = minimum(dual(lattice), options);
  const Rat prod = m.min * md.min;
  const Rat t = min_product_threshold(static_cast<std::int64_t>(lattice.dim()));
  CertReport rep = make_report("min-product");
  rep.details["min"] = m.min.get_str();
  rep.details["dual_min"] = md.min.get_str();
  rep.details["product"] = prod.get_str();
  rep.details["threshold"] = t.get_str();
  rep.verdict = prod >= t ? Verdict::Pass : Verdict::Fail;
  rep.summary = "min * dual min = " + prod.get_str() + (prod >= t ? " >= " : " < ") + t.get_str();
  return rep;
}

CertReport coxeter_identity_check(const Lattice& lattice, std::size_t witnesses, std::uint64_t seed,
                                  const EnumerationOptions& options) {
  const std::size_t n = lattice.dim();
  CertReport rep = make_report("coxeter-identity");
  const auto res = enumerate(lattice, Rat(2), std::nullopt, true, options);
  const VectorLayer* roots = nullptr;
  for (const auto& l : res.layers)
    if (l.norm == 2) roots = &l;
  if (!roots || roots->vectors.size() % n != 0) {
    rep.verdict = Verdict::Fail;
    rep.summary = "non-root-lattice input: the number of norm-2 vectors is not a multiple of the dimension";
    rep.details["roots"] = roots ? roots->vectors.size() : 0;
    return rep;
  }
  const std::int64_t h = static_cast<std::int64_t>(roots->vectors.size() / n);
  rep.details["roots"] = roots->vectors.size();
  rep.details["h"] = h;
  rep.details["seed"] = seed;
  rep.details["witnesses"] = witnesses;
  const ScaledGram sg(lattice);
  const auto ys = dual_coords(sg, roots->vectors);
  for (const auto& a : witness_directions(n, witnesses, seed)) {
    Int lhs = 0;
    for (const auto& y : ys) {
      Int s = 0;
      for (std::size_t i = 0; i < n; ++i) s += Int(a[i]) * y[i];
      lhs += s * s;
    }
    // D^2 sum (x,a)^2 = 2 h D (a Gi a)
    const Int rhs = 2 * h * sg.d * sg.form(a);
    if (lhs != rhs) {
      rep.verdict = Verdict::Fail;
      rep.summary = "sum of squared inner products differs from 2h(a,a)";
      rep.details["failure"] = {{"witness", a}};
      return rep;
    }
  }
  rep.verdict = Verdict::Pass;
  rep.summary = "h = " + std::to_string(h) + " and sum (x,a)^2 = 2h (a,a) on " + std::to_string(witnesses) +
                " witnesses";
  return rep;
}

std::optional<int> predicted_design_strength(std::int64_t level, std::int64_t weight) {
  if (weight <= 0) return std::nullopt;
  switch (level) {
    case 1:
      if (weight % 12 == 0) return 11;
      if (weight % 12 == 4) return 7;
      break;
    case 2:
      if (weight % 8 == 0) return 7;
      if (weight % 8 == 2) return 5;
      break;
    case 3:
      if (weight % 6 == 0 || weight % 6 == 1) return 5;
      break;
    default: break;
  }
  return std::nullopt;
}

ZonalHarmonic::ZonalHarmonic(std::size_t n, int t, std::vector<std::int64_t> alpha)
    : n_(n), t_(t), alpha_(std::move(alpha)) {
  if (n == 0) raise(ErrorKind::Shape, "dimension must be positive");
  if (t < 1) raise(ErrorKind::Domain, "harmonic degree must be at least 1");
  if (alpha_.size() != n) raise(ErrorKind::Shape, "direction has wrong length");
  if (std::all_of(alpha_.begin(), alpha_.end(), [](std::int64_t v) { return v == 0; }))
    raise(ErrorKind::Domain, "zero direction");
  if (n == 1 && t >= 2) raise(ErrorKind::Domain, "no nonzero harmonic of degree >= 2 in dimension 1");
  // z[j]: coefficient of s^(deg-2j) (r a)^j
  std::vector<Rat> prev{Rat(1)}, cur;
  const Rat lambda(static_cast<long>(n) - 2, 2);
  if (n <= 2)
    cur = {Rat(1)};
  else
    cur = {2 * lambda};
  for (int d = 2; d <= t; ++d) {
    std::vector<Rat> next(static_cast<std::size_t>(d / 2) + 1, Rat(0));
    Rat c1, c2;
    if (n == 2) {
      c1 = 2;
      c2 = 1;
    } else {
      c1 = 2 * (Rat(d - 1) + lambda) / d;
      c2 = (Rat(d - 2) + 2 * lambda) / d;
    }
    for (std::size_t j = 0; j < cur.size(); ++j) next[j] += c1 * cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j + 1] -= c2 * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  Int l = 1, g = 0;
  for (auto& c : cur) {
    c.canonicalize();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  coeffs_.resize(cur.size());
  for (std::size_t j = 0; j < cur.size(); ++j) {
    const Rat v = cur[j] * Rat(l);
    coeffs_[j] = v.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), coeffs_[j].get_mpz_t());
  }
  if (g > 1)
    for (auto& c : coeffs_) c /= g;
  if (coeffs_[0] < 0)
    for (auto& c : coeffs_) c = -c;
}

Rat ZonalHarmonic::evaluate(const Rat& s, const Rat& r, const Rat& a) const {
  Rat out = 0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j)
    out += Rat(coeffs_[j]) * rpow(s, t_ - 2 * static_cast<std::int64_t>(j)) * rpow(r * a, static_cast<std::int64_t>(j));
  out.canonicalize();
  return out;
}

ZonalHarmonic zonal_harmonic(std::size_t n, int t, std::vector<std::int64_t> alpha) {
  return ZonalHarmonic(n, t, std::move(alpha));
}

std::map<Rat, std::vector<Rat>> layer_power_sums(const Lattice& lattice, const std::vector<std::int64_t>& alpha,
                                                 int max_power, const Rat& bound, const EnumerationOptions& options) {
  const std::size_t n = lattice.dim();
  if (alpha.size() != n) raise(ErrorKind::Shape, "direction has wrong length");
  if (max_power < 0) raise(ErrorKind::Parameter, "negative power");
  // (x, alpha) = x . v with v = G alpha^T
  std::vector<Rat> v(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) v[i] += lattice.gram()(i, j) * alpha[j];
    v[i].canonicalize();
  }
  const ShortVectorEnumerator e(lattice.gram(), bound, std::nullopt, options.lll);
  const auto [w, c] = e.reduced_form(v);
  Int den = c.get_den();
  for (const auto& x : w) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<std::int64_t> wi(n);
  for (std::size_t i = 0; i < n; ++i) wi[i] = to_i64(Rat(w[i] * Rat(den)).get_num(), "linear form");
  const std::int64_t ci = to_i64(Rat(c * Rat(den)).get_num(), "linear form");

  using Sums = std::map<__int128, std::vector<Accumulator>>;
  std::vector<Sums> per_task(e.task_count());
  const unsigned threads = options.threads ? options.threads : default_thread_count();
  const std::size_t width = static_cast<std::size_t>(max_power) + 1;
  parallel_for_tasks(e.task_count(), threads, [&](std::size_t t) {
    Sums& sums = per_task[t];
    e.run_task(t, [&](std::span<const std::int64_t> z, __int128 norm) {
      __int128 s = -static_cast<__int128>(ci);
      for (std::size_t i = 0; i < z.size(); ++i) s += static_cast<__int128>(z[i]) * wi[i];
      if (s > INT64_MAX || s < INT64_MIN) raise(ErrorKind::ArithmeticOverflow, "inner product too large");
      auto it = sums.find(norm);
      if (it == sums.end()) it = sums.emplace(norm, std::vector<Accumulator>(width)).first;
      add_powers(static_cast<std::int64_t>(s), it->second);
    });
  });
  Sums merged;
  for (auto& sums : per_task)
    for (auto& [norm, acc] : sums) {
      auto it = merged.find(norm);
      if (it == merged.end()) {
        merged.emplace(norm, std::move(acc));
      } else {
        for (std::size_t p = 0; p < width; ++p) it->second[p].merge(acc[p]);
      }
    }
  std::map<Rat, std::vector<Rat>> out;
  for (const auto& [norm, acc] : merged) {
    std::vector<Rat> row(width);
    for (std::size_t p = 0; p < width; ++p) {
      row[p] = Rat(acc[p].value(), ipow(den, static_cast<std::int64_t>(p)));
      row[p].canonicalize();
    }
    out.emplace(e.norm_of(norm), std::move(row));
  }
  return out;
}

QSeries harmonic_theta_truncation(const Lattice& lattice, const ZonalHarmonic& p, const Rat& bound,
                                  const EnumerationOptions& options) {
  if (p.dim() != lattice.dim()) raise(ErrorKind::Shape, "harmonic and lattice dimensions differ");
  const auto sums = layer_power_sums(lattice, p.alpha(), p.degree(), bound, options);
  Rat a = 0;
  const auto& g = lattice.gram();
  for (std::size_t i = 0; i < lattice.dim(); ++i)
    for (std::size_t j = 0; j < lattice.dim(); ++j) a += Rat(p.alpha()[i]) * g(i, j) * p.alpha()[j];
  const Int d = common_denominator(g);
  Rat next;
  if (lattice.even()) {
    Int m = floor_of(bound) + 1;
    if (m % 2 != 0) m += 1;
    next = m;
  } else {
    next = Rat(floor_of(bound * d) + 1, d);
    next.canonicalize();
  }
  const QSeries::Exponent den = 12 * to_i64(d, "norm denominator");
  const Rat prec = next * den;
  QSeries out(to_i64(prec.get_num(), "series precision"), den);
  const auto& c = p.coefficients();
  for (const auto& [r, s] : sums) {
    Rat v = 0;
    for (std::size_t j = 0; j < c.size(); ++j)
      v += Rat(c[j]) * rpow(r * a, static_cast<std::int64_t>(j)) * s[static_cast<std::size_t>(p.degree()) - 2 * j];
    v.canonicalize();
    if (v == 0) continue;
    const Rat e = r * den;
    out.add_term(to_i64(e.get_num(), "series exponent"), v);
  }
  return out;
}

}  // namespace modlat
