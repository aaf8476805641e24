#pragma once

// Subgroup-theoretic toolbox over Cayley-table groups: closures, derived
// subgroup, centralizers, normalizers, the full subgroup lattice with its
// Moebius function, and automorphism counting.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "homdiv/errors.hpp"
#include "homdiv/group.hpp"

namespace homdiv {

inline constexpr std::size_t kDefaultOrderBound = 48;

namespace detail {

inline void check_indices(const FiniteGroup& g, std::span<const Element> set) {
  for (Element e : set) g.check_index(e);
}

inline void check_parent(const FiniteGroup& g, const Subgroup& h) {
  if (!h.parent().same_as(g)) throw ForeignSubgroup("subgroup belongs to a different group");
}

inline void check_order_bound(const FiniteGroup& g, std::size_t bound, const char* what) {
  if (g.order() > bound)
    throw OrderBoundExceeded(std::string(what) + ": group order " + std::to_string(g.order()) +
                             " exceeds bound " + std::to_string(bound));
}

// Work-queue closure of seed and generators together.
inline std::vector<Element> close(const FiniteGroup& g, std::span<const Element> seed,
                                  std::span<const Element> generators) {
  std::vector<char> in(g.order(), 0);
  std::vector<Element> elems;
  elems.reserve(g.order());
  auto add = [&](Element x) {
    if (!in[x]) {
      in[x] = 1;
      elems.push_back(x);
    }
  };
  add(0);
  for (Element x : seed) add(x);
  std::vector<Element> gens;
  for (std::span<const Element> part : {seed, generators})
    for (Element s : part) {
      if (s == 0) continue;
      gens.push_back(s);
      gens.push_back(g.inv(s));
    }
  for (std::size_t cursor = 0; cursor < elems.size(); ++cursor)
    for (Element s : gens) add(g.mul(elems[cursor], s));
  std::sort(elems.begin(), elems.end());
  return elems;
}

}  // namespace detail

/// Smallest subgroup containing `generators`.
inline Subgroup subgroup_closure(const FiniteGroup& g, std::span<const Element> generators) {
  detail::check_indices(g, generators);
  return Subgroup::trusted(g, detail::close(g, {}, generators));
}

inline Subgroup subgroup_closure(const FiniteGroup& g, std::initializer_list<Element> generators) {
  return subgroup_closure(g, std::span<const Element>(generators.begin(), generators.size()));
}

inline Subgroup derived_subgroup(const FiniteGroup& g) {
  std::vector<char> seen(g.order(), 0);
  std::vector<Element> commutators;
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b) {
      const Element c = g.commutator(a, b);
      if (!seen[c]) {
        seen[c] = 1;
        commutators.push_back(c);
      }
    }
  return Subgroup::trusted(g, detail::close(g, {}, commutators));
}

inline Subgroup centralizer(const FiniteGroup& g, std::span<const Element> set) {
  detail::check_indices(g, set);
  std::vector<Element> out;
  for (Element x = 0; x < g.order(); ++x)
    if (std::all_of(set.begin(), set.end(), [&](Element s) { return g.mul(x, s) == g.mul(s, x); }))
      out.push_back(x);
  return Subgroup::trusted(g, std::move(out));
}

inline Subgroup centralizer(const FiniteGroup& g, const Subgroup& a) {
  detail::check_parent(g, a);
  return centralizer(g, a.elements());
}

inline Subgroup normalizer(const FiniteGroup& g, const Subgroup& a) {
  detail::check_parent(g, a);
  std::vector<Element> out;
  for (Element x = 0; x < g.order(); ++x) {
    const auto elems = a.elements();
    if (std::all_of(elems.begin(), elems.end(), [&](Element y) { return a.contains(g.conj(y, x)); }))
      out.push_back(x);
  }
  return Subgroup::trusted(g, std::move(out));
}

inline Subgroup normal_closure(const FiniteGroup& g, std::span<const Element> set) {
  detail::check_indices(g, set);
  std::vector<char> seen(g.order(), 0);
  std::vector<Element> conjugates;
  for (Element s : set)
    for (Element x = 0; x < g.order(); ++x) {
      const Element c = g.conj(s, x);
      if (!seen[c]) {
        seen[c] = 1;
        conjugates.push_back(c);
      }
    }
  return Subgroup::trusted(g, detail::close(g, {}, conjugates));
}

inline bool is_normal(const FiniteGroup& g, const Subgroup& a) {
  return normalizer(g, a).order() == g.order();
}

/// Every subgroup exactly once, sorted by (order, element set).
///
/// Layered extension: the first layer is the set of cyclic subgroups; each
/// further layer closes a known subgroup with one extra element. Subgroups
/// are deduplicated by their element sets.
inline std::vector<Subgroup> all_subgroups(const FiniteGroup& g,
                                           std::size_t order_bound = kDefaultOrderBound) {
  detail::check_order_bound(g, order_bound, "all_subgroups");
  std::set<std::vector<Element>> seen;
  std::vector<std::vector<Element>> layer;
  for (Element x = 0; x < g.order(); ++x) {
    const Element one[] = {x};
    auto elems = detail::close(g, {}, one);
    if (seen.insert(elems).second) layer.push_back(std::move(elems));
  }
  while (!layer.empty()) {
    std::vector<std::vector<Element>> next;
    for (const auto& base : layer) {
      std::vector<char> in(g.order(), 0);
      for (Element e : base) in[e] = 1;
      for (Element x = 0; x < g.order(); ++x) {
        if (in[x]) continue;
        const Element one[] = {x};
        auto elems = detail::close(g, base, one);
        if (seen.insert(elems).second) next.push_back(std::move(elems));
      }
    }
    layer = std::move(next);
  }
  std::vector<Subgroup> out;
  out.reserve(seen.size());
  for (const auto& elems : seen) out.push_back(Subgroup::trusted(g, elems));
  std::sort(out.begin(), out.end());
  return out;
}

struct MoebiusTable {
  std::vector<Subgroup> subgroups;
  std::vector<std::int64_t> mu;

  std::int64_t mu_of(const Subgroup& h) const {
    for (std::size_t i = 0; i < subgroups.size(); ++i)
      if (subgroups[i] == h) return mu[i];
    throw ForeignSubgroup("subgroup not present in the Moebius table");
  }
};

/// mu(G) = 1 and mu(H) = -sum of mu(K) over H < K <= G, computed top-down.
inline MoebiusTable moebius_table(const FiniteGroup& g, std::size_t order_bound = kDefaultOrderBound) {
  MoebiusTable t;
  t.subgroups = all_subgroups(g, order_bound);
  const std::size_t count = t.subgroups.size();
  t.mu.assign(count, 0);
  for (std::size_t i = count; i-- > 0;) {
    if (t.subgroups[i].is_whole()) {
      t.mu[i] = 1;
      continue;
    }
    std::int64_t sum = 0;
    for (std::size_t j = i + 1; j < count; ++j)
      if (t.subgroups[j].order() > t.subgroups[i].order() && t.subgroups[i].is_subset_of(t.subgroups[j]))
        sum += t.mu[j];
    t.mu[i] = -sum;
  }
  return t;
}

/// Greedy generating set: repeatedly add the smallest element outside the
/// current closure.
inline std::vector<Element> greedy_generators(const FiniteGroup& g) {
  std::vector<Element> gens;
  std::vector<Element> current{0};
  while (current.size() < g.order()) {
    Element next = 0;
    while (std::binary_search(current.begin(), current.end(), next)) ++next;
    gens.push_back(next);
    current = detail::close(g, {}, gens);
  }
  return gens;
}

namespace detail {

// Extends generator images to a map on all of g by breadth-first search over
// right multiplication. Returns false if two paths disagree, which means the
// assignment does not define a homomorphism.
inline bool extend_to_map(const FiniteGroup& g, std::span<const Element> gens,
                          std::span<const Element> images, const FiniteGroup& target,
                          std::vector<std::int64_t>& map) {
  map.assign(g.order(), -1);
  map[0] = 0;
  std::vector<Element> queue{0};
  for (std::size_t cursor = 0; cursor < queue.size(); ++cursor) {
    const Element x = queue[cursor];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const Element y = g.mul(x, gens[i]);
      const auto fy = std::int64_t(target.mul(Element(map[x]), images[i]));
      if (map[y] < 0) {
        map[y] = fy;
        queue.push_back(y);
      } else if (map[y] != fy) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace detail

/// Number of automorphisms. Candidate images of the greedy generators range
/// over elements of equal order; each candidate is extended by closure and
/// kept when it is a well-defined bijection.
inline std::uint64_t automorphism_count(const FiniteGroup& g,
                                        std::size_t order_bound = kDefaultOrderBound) {
  detail::check_order_bound(g, order_bound, "automorphism_count");
  const auto gens = greedy_generators(g);
  if (gens.empty()) return 1;
  std::vector<std::vector<Element>> candidates(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto ord = g.element_order(gens[i]);
    for (Element x = 0; x < g.order(); ++x)
      if (g.element_order(x) == ord) candidates[i].push_back(x);
  }
  std::uint64_t count = 0;
  std::vector<std::size_t> pos(gens.size(), 0);
  std::vector<Element> images(gens.size());
  std::vector<std::int64_t> map;
  std::vector<char> hit(g.order());
  while (true) {
    for (std::size_t i = 0; i < gens.size(); ++i) images[i] = candidates[i][pos[i]];
    if (detail::extend_to_map(g, gens, images, g, map)) {
      std::fill(hit.begin(), hit.end(), 0);
      bool bijective = true;
      for (auto v : map) {
        if (hit[std::size_t(v)]) {
          bijective = false;
          break;
        }
        hit[std::size_t(v)] = 1;
      }
      if (bijective) ++count;
    }
    std::size_t i = gens.size();
    while (i-- > 0) {
      if (++pos[i] < candidates[i].size()) break;
      pos[i] = 0;
    }
    if (i == std::size_t(-1)) break;
  }
  return count;
}

}  // namespace homdiv
