#pragma once

// Brute-force reference computations. They only read Cayley tables through
// mul/inv and never call the library's algorithms, so agreement with the
// library is evidence rather than tautology.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "homdiv/group.hpp"

namespace oracle {

using homdiv::Element;
using homdiv::FiniteGroup;

// Closure by repeated products until nothing new appears (no inverses needed
// in a finite group).
inline std::vector<Element> closure(const FiniteGroup& g, std::vector<Element> gens) {
  std::set<Element> s{0};
  s.insert(gens.begin(), gens.end());
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<Element> cur(s.begin(), s.end());
    for (Element a : cur)
      for (Element b : cur)
        if (s.insert(g.mul(a, b)).second) grew = true;
  }
  return {s.begin(), s.end()};
}

inline void for_each_tuple(std::size_t size, std::size_t n, const std::function<void(const std::vector<Element>&)>& f) {
  std::vector<Element> t(n, 0);
  while (true) {
    f(t);
    std::size_t i = n;
    while (i-- > 0) {
      if (++t[i] < size) break;
      t[i] = 0;
    }
    if (i == std::size_t(-1)) return;
  }
}

inline std::uint64_t generating_tuples(const FiniteGroup& g, std::size_t n) {
  std::uint64_t count = 0;
  for_each_tuple(g.order(), n, [&](const std::vector<Element>& t) {
    if (closure(g, t).size() == g.order()) ++count;
  });
  return count;
}

inline std::uint64_t commuting_pairs(const FiniteGroup& g) {
  std::uint64_t total = 0;
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b) total += g.mul(a, b) == g.mul(b, a);
  return total;
}

inline std::size_t derived_order(const FiniteGroup& g) {
  std::vector<Element> comms;
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b) comms.push_back(g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b)));
  return closure(g, comms).size();
}

// Every subgroup as a closure of at most three elements; enough for the
// catalog groups, whose subgroups are all 3-generated.
inline std::set<std::vector<Element>> subgroups(const FiniteGroup& g) {
  std::set<std::vector<Element>> out;
  const std::size_t n = g.order();
  for (Element a = 0; a < n; ++a)
    for (Element b = a; b < n; ++b)
      for (Element c = b; c < n; ++c) out.insert(closure(g, {a, b, c}));
  return out;
}

inline std::uint64_t automorphisms(const FiniteGroup& g) {
  // Bijections that respect the table, found by extending images of a
  // generating set and checking the whole table.
  std::vector<Element> gens;
  while (closure(g, gens).size() < g.order()) {
    auto cur = closure(g, gens);
    Element x = 0;
    while (std::binary_search(cur.begin(), cur.end(), x)) ++x;
    gens.push_back(x);
  }
  std::uint64_t count = 0;
  for_each_tuple(g.order(), gens.size(), [&](const std::vector<Element>& images) {
    std::vector<long> map(g.order(), -1);
    map[0] = 0;
    std::vector<Element> order{0};
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t k = 0; k < gens.size(); ++k) {
        const Element y = g.mul(order[i], gens[k]);
        if (map[y] < 0) {
          map[y] = long(g.mul(Element(map[order[i]]), images[k]));
          order.push_back(y);
        }
      }
    std::set<long> values(map.begin(), map.end());
    if (values.size() != g.order()) return;
    for (Element a = 0; a < g.order(); ++a)
      for (Element b = 0; b < g.order(); ++b)
        if (map[g.mul(a, b)] != long(g.mul(Element(map[a]), Element(map[b])))) return;
    ++count;
  });
  return count;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 0; k < n; ++k) c += std::gcd(k, n) == 1;
  return n == 1 ? 1 : c;
}

// Pythagorean unit triples over Z/n by plain integer arithmetic.
inline std::uint64_t pythagorean_units(std::int64_t n) {
  std::vector<std::int64_t> units;
  for (std::int64_t a = 0; a < n; ++a)
    if (std::gcd(a, n) == 1 && (n > 1 || a == 0)) units.push_back(a);
  std::uint64_t c = 0;
  for (auto x : units)
    for (auto y : units)
      for (auto z : units) c += ((x * x + y * y - z * z) % n + n) % n == 0;
  return c;
}

// 2x2 matrices over Z/n as {a, b, c, d}.
using Mat2 = std::array<std::int64_t, 4>;

inline Mat2 mat_mul(const Mat2& x, const Mat2& y, std::int64_t n) {
  return {(x[0] * y[0] + x[1] * y[2]) % n, (x[0] * y[1] + x[1] * y[3]) % n, (x[2] * y[0] + x[3] * y[2]) % n,
          (x[2] * y[1] + x[3] * y[3]) % n};
}

inline std::vector<Mat2> mat_units(std::int64_t n) {
  std::vector<Mat2> out;
  for (std::int64_t i = 0; i < n * n * n * n; ++i) {
    Mat2 m{i / (n * n * n) % n, i / (n * n) % n, i / n % n, i % n};
    const std::int64_t det = ((m[0] * m[3] - m[1] * m[2]) % n + n) % n;
    if (std::gcd(det, n) == 1) out.push_back(m);
  }
  return out;
}

inline std::uint64_t pythagorean_mat2(std::int64_t n) {
  const auto u = mat_units(n);
  std::uint64_t c = 0;
  for (const auto& x : u)
    for (const auto& y : u)
      for (const auto& z : u) {
        const auto a = mat_mul(x, x, n), b = mat_mul(y, y, n), d = mat_mul(z, z, n);
        bool zero = true;
        for (int k = 0; k < 4; ++k) zero = zero && ((a[k] + b[k] - d[k]) % n + n) % n == 0;
        c += zero;
      }
  return c;
}

inline std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t n) {
  std::int64_t r = 1 % n;
  a %= n;
  while (e > 0) {
    if (e & 1) r = r * a % n;
    a = a * a % n;
    e >>= 1;
  }
  return r;
}

/// Groups used throughout the tests and the acceptance suite.
struct CatalogEntry {
  std::string spec;
  FiniteGroup group;
};

inline std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  for (std::size_t n = 2; n <= 8; ++n) out.push_back({"cyclic:" + std::to_string(n), FiniteGroup::cyclic(n)});
  out.push_back({"prod:cyclic:2,cyclic:2", FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))});
  out.push_back({"prod:cyclic:2,cyclic:4", FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4))});
  out.push_back({"sym:3", FiniteGroup::symmetric(3)});
  out.push_back({"sym:4", FiniteGroup::symmetric(4)});
  out.push_back({"alt:4", FiniteGroup::alternating(4)});
  out.push_back({"dihedral:4", FiniteGroup::dihedral(4)});
  out.push_back({"dihedral:5", FiniteGroup::dihedral(5)});
  return out;
}

}  // namespace oracle
