// Builds data/catalog.json from explicit constructions (codes, root systems).
// Run: make_catalog > data/catalog.json
#include <array>
#include <iostream>
#include <vector>

#include "json.hpp"
#include "modlat/lattice.hpp"
#include "modlat/lll.hpp"
#include "modlat/matrix.hpp"

using namespace modlat;
using Rows = std::vector<std::vector<long>>;

namespace {

RatMatrix to_matrix(const Rows& rows) {
  RatMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

// Gram matrix of the Z-span of integer generator rows under the form q,
// scaled by `factor`, then LLL-reduced.
IntMatrix span_gram(const Rows& gens, const RatMatrix& form, const Rat& factor) {
  const RatMatrix basis = lattice_basis(to_matrix(gens));
  const RatMatrix g = scaled(congruent(basis, form), factor);
  return integer_multiple(lll_reduce_gram(g).gram, 1);
}

IntMatrix cartan(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) g(i, i) = 2;
  for (auto [a, b] : edges) g(a, b) = g(b, a) = -1;
  return g;
}

IntMatrix block(const std::vector<IntMatrix>& parts) {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.rows();
  IntMatrix g(n, n);
  std::size_t o = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.rows(); ++j) g(o + i, o + j) = p(i, j);
    o += p.rows();
  }
  return g;
}

IntMatrix leech() {
  // Binary Golay code: cyclic [23,12] code from x^11+x^10+x^6+x^5+x^4+x^2+1, plus parity.
  const std::array<int, 12> g = {1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1};
  Rows gens;
  for (int s = 0; s < 12; ++s) {
    std::vector<long> c(24, 0);
    int weight = 0;
    for (int k = 0; k < 12; ++k)
      if (g[k]) {
        c[s + k] = 1;
        ++weight;
      }
    c[23] = weight % 2;
    for (auto& v : c) v *= 2;
    gens.push_back(c);
  }
  for (int i = 0; i < 24; ++i) {
    std::vector<long> e(24, 0);
    e[i] = 8;
    gens.push_back(e);
  }
  for (int j = 1; j < 24; ++j) {
    std::vector<long> a(24, 0), b(24, 0);
    a[0] = 4;
    a[j] = 4;
    b[0] = 4;
    b[j] = -4;
    gens.push_back(a);
    gens.push_back(b);
  }
  std::vector<long> odd(24, 1);
  odd[0] = -3;
  gens.push_back(odd);
  return span_gram(gens, RatMatrix::identity(24), Rat(1, 8));
}

IntMatrix barnes_wall() {
  // RM(1,4): all-ones plus the four coordinate functions on F_2^4.
  Rows gens;
  gens.push_back(std::vector<long>(16, 1));
  for (int bit = 0; bit < 4; ++bit) {
    std::vector<long> c(16, 0);
    for (int p = 0; p < 16; ++p) c[p] = (p >> bit) & 1;
    gens.push_back(c);
  }
  for (int i = 0; i < 16; ++i)
    for (int j = i + 1; j < 16; ++j) {
      std::vector<long> a(16, 0), b(16, 0);
      a[i] = 2;
      a[j] = 2;
      b[i] = 2;
      b[j] = -2;
      gens.push_back(a);
      gens.push_back(b);
    }
  for (int i = 0; i < 16; ++i) {
    std::vector<long> e(16, 0);
    e[i] = 4;
    gens.push_back(e);
  }
  return span_gram(gens, RatMatrix::identity(16), Rat(1, 2));
}

// F4 = {0, 1, w, w^2} as 2-bit values a + b w, with w^2 = w + 1.
int f4_mul(int x, int y) {
  const int a = x & 1, b = x >> 1, c = y & 1, d = y >> 1;
  const int c0 = (a & c) ^ (b & d);
  const int c1 = (a & d) ^ (b & c) ^ (b & d);
  return c0 | (c1 << 1);
}

IntMatrix coxeter_todd() {
  // Hexacode words (a, b, c, f(1), f(w), f(w^2)) with f(x) = a x^2 + b x + c,
  // lifted to the Eisenstein integers E = Z[w]; coordinates u + v w.
  const int w = 2, w2 = 3;
  auto f = [&](int a, int b, int c, int x) { return f4_mul(a, f4_mul(x, x)) ^ f4_mul(b, x) ^ c; };
  auto word = [&](int a, int b, int c) {
    return std::array<int, 6>{a, b, c, f(a, b, c, 1), f(a, b, c, w), f(a, b, c, w2)};
  };
  auto lift = [](const std::array<int, 6>& cw) {
    std::vector<long> v(12, 0);
    for (int k = 0; k < 6; ++k) {
      v[2 * k] = cw[k] & 1;
      v[2 * k + 1] = cw[k] >> 1;
    }
    return v;
  };
  Rows gens;
  for (const auto& base : {word(1, 0, 0), word(0, 1, 0), word(0, 0, 1)}) {
    gens.push_back(lift(base));
    std::array<int, 6> wc{};
    for (int k = 0; k < 6; ++k) wc[k] = f4_mul(w, base[k]);
    gens.push_back(lift(wc));
  }
  for (int i = 0; i < 12; ++i) {
    std::vector<long> e(12, 0);
    e[i] = 2;
    gens.push_back(e);
  }
  RatMatrix form(12, 12);
  for (int k = 0; k < 6; ++k) {
    form(2 * k, 2 * k) = 1;
    form(2 * k + 1, 2 * k + 1) = 1;
    form(2 * k, 2 * k + 1) = Rat(-1, 2);
    form(2 * k + 1, 2 * k) = Rat(-1, 2);
  }
  return span_gram(gens, form, Rat(1));
}

IntMatrix d12_plus() {
  // 2 D12 together with the all-ones glue, scaled back by 1/4.
  Rows gens;
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j) {
      std::vector<long> a(12, 0), b(12, 0);
      a[i] = 2;
      a[j] = 2;
      b[i] = 2;
      b[j] = -2;
      gens.push_back(a);
      gens.push_back(b);
    }
  gens.push_back(std::vector<long>(12, 1));
  return span_gram(gens, RatMatrix::identity(12), Rat(1, 4));
}

nlohmann::json gram_json(const IntMatrix& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < g.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < g.cols(); ++j) r.push_back(g(i, j).get_si());
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json entry(const std::string& name, long level, const IntMatrix& g, const std::string& note, long min) {
  const Lattice l = lattice_from_ints(g);
  return {{"name", name},
          {"level", level},
          {"gram", gram_json(g)},
          {"note", note},
          {"det", l.det().get_str()},
          {"even", l.even()},
          {"min", min}};
}

}  // namespace

int main() {
  const IntMatrix e8 = cartan(8, {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}});
  const IntMatrix d4 = cartan(4, {{0, 1}, {1, 2}, {1, 3}});
  const IntMatrix a2{{2, -1}, {-1, 2}};
  const IntMatrix a2x2{{4, -2}, {-2, 4}};
  const IntMatrix a2x5{{10, -5}, {-5, 10}};
  const IntMatrix b7{{2, 1}, {1, 4}};
  const IntMatrix b7x2{{4, 2}, {2, 8}};

  nlohmann::json out = nlohmann::json::array();
  out.push_back(entry("E8", 1, e8, "Cartan matrix of the E8 root system", 2));
  out.push_back(entry("D4", 2, d4, "Cartan matrix of the D4 root system", 2));
  out.push_back(entry("A2", 3, a2, "Cartan matrix of the A2 root system", 2));
  out.push_back(entry("Base5", 5, IntMatrix{{2, -1, -1, -1}, {-1, 2, 0, 0}, {-1, 0, 4, -1}, {-1, 0, -1, 4}},
                      "4-dimensional even lattice of determinant 25 and level 5, found by a search over small Gram "
                      "matrices; formally strongly 5-modular",
                      2));
  out.push_back(entry("Base6", 6, block({a2, a2x2}),
                      "A2 + sqrt(2) A2 (A2 tensor C_2); one of the minimal strongly 6-modular genera, the one "
                      "containing A2 tensor C_2",
                      2));
  out.push_back(entry("Base7", 7, b7, "binary form [2,1;1,4], the even lattice of determinant 7", 2));
  out.push_back(entry("Base11", 11, IntMatrix{{2, 1}, {1, 6}}, "binary form [2,1;1,6], determinant 11", 2));
  out.push_back(entry("Base14", 14, block({b7, b7x2}), "Base7 + sqrt(2) Base7, determinant 196", 2));
  out.push_back(entry("Base15", 15, block({a2, a2x5}), "A2 + sqrt(5) A2, determinant 225", 2));
  out.push_back(entry("Base23", 23, IntMatrix{{2, 1}, {1, 12}}, "binary form [2,1;1,12], determinant 23", 2));
  out.push_back(entry("K12", 3, coxeter_todd(),
                      "Coxeter-Todd lattice: Eisenstein lattice over the hexacode, x mod 2 in the hexacode", 4));
  out.push_back(entry("BW16", 2, barnes_wall(),
                      "Barnes-Wall lattice: x mod 2 in RM(1,4), coordinate sum divisible by 4, scaled by 1/sqrt(2)",
                      4));
  out.push_back(entry("Leech", 1, leech(),
                      "Leech lattice from the extended binary Golay code (standard construction scaled by 1/sqrt(8))",
                      4));
  out.push_back(entry("D12+", 1, d12_plus(), "odd unimodular lattice D12 with the all-halves glue vector", 2));
  std::cout << out.dump(1) << "\n";
  return 0;
}
