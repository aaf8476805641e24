#pragma once

/**
 * @file group.hpp
 * @brief Finite groups stored as full Cayley tables.
 *
 * Elements are indices in [0, n). Index 0 is always the identity, every
 * constructor renumbers to guarantee it. A FiniteGroup is a cheap handle to
 * immutable shared data, so copies are O(1) and two handles compare equal
 * (same_as) only when they refer to the same table.
 *
 * Permutation groups follow the right-action convention: p^(gh) = (p^g)^h,
 * so the product g*h applies g first. Conjugation is x^y = y^-1 x y.
 */

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "homdiv/errors.hpp"

namespace homdiv {

using Element = std::uint32_t;

namespace detail {

using Perm = std::vector<int>;

// Right action: apply p, then q.
inline Perm compose(const Perm& p, const Perm& q) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[static_cast<std::size_t>(p[i])];
  return r;
}

inline std::uint64_t perm_code(const Perm& p) {
  std::uint64_t code = 0;
  for (int v : p) code = code * p.size() + static_cast<std::uint64_t>(v);
  return code;
}

inline bool is_even(const Perm& p) {
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0;
}

// GAP-style cycle notation over points 1..n, identity is "()".
inline std::string cycle_label(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  std::ostringstream out;
  bool any = false;
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (seen[start] || p[start] == static_cast<int>(start)) continue;
    out << '(';
    std::size_t cur = start;
    bool first = true;
    while (!seen[cur]) {
      seen[cur] = true;
      if (!first) out << ',';
      out << cur + 1;
      first = false;
      cur = static_cast<std::size_t>(p[cur]);
    }
    out << ')';
    any = true;
  }
  return any ? out.str() : "()";
}

}  // namespace detail

/// First violation found while validating a Cayley table, if any.
struct TableViolation {
  std::string what;
  Element i = 0, j = 0, k = 0;
};

class FiniteGroup {
 public:
  /// Validates identity at 0, the Latin-square property and associativity.
  /// Throws InvalidTable naming the first violating triple.
  static FiniteGroup from_table(std::size_t n, std::vector<Element> table,
                                std::vector<std::string> labels = {}) {
    if (n == 0) throw InvalidTable("group order must be positive");
    if (table.size() != n * n)
      throw InvalidTable("table has " + std::to_string(table.size()) + " entries, expected " +
                         std::to_string(n * n));
    if (auto v = find_violation(n, table)) {
      std::ostringstream msg;
      msg << v->what << " at (" << v->i << ", " << v->j << ", " << v->k << ")";
      throw InvalidTable(msg.str());
    }
    return FiniteGroup(n, std::move(table), std::move(labels));
  }

  /// For tables known to satisfy the group axioms by construction. Only the
  /// shape and the identity row/column are checked.
  static FiniteGroup from_trusted_table(std::size_t n, std::vector<Element> table,
                                        std::vector<std::string> labels = {}) {
    if (n == 0 || table.size() != n * n) throw InvalidTable("table shape does not match group order");
    for (std::size_t j = 0; j < n; ++j)
      if (table[j] != j || table[j * n] != j) throw InvalidTable("element 0 is not the identity");
    return FiniteGroup(n, std::move(table), std::move(labels));
  }

  /// Returns the first table defect, checking identity, Latin square, then
  /// associativity in lexicographic (i, j, k) order.
  static std::optional<TableViolation> find_violation(std::size_t n,
                                                      std::span<const Element> table) {
    auto at = [&](std::size_t i, std::size_t j) { return table[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (at(i, j) >= n)
          return TableViolation{"entry out of range", Element(i), Element(j), 0};
    for (std::size_t j = 0; j < n; ++j) {
      if (at(0, j) != j) return TableViolation{"element 0 is not a left identity", 0, Element(j), 0};
      if (at(j, 0) != j) return TableViolation{"element 0 is not a right identity", Element(j), 0, 0};
    }
    std::vector<char> seen(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t j = 0; j < n; ++j) {
        if (seen[at(i, j)]) return TableViolation{"row is not a permutation", Element(i), Element(j), 0};
        seen[at(i, j)] = 1;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        if (seen[at(i, j)]) return TableViolation{"column is not a permutation", Element(i), Element(j), 0};
        seen[at(i, j)] = 1;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (at(at(i, j), k) != at(i, at(j, k)))
            return TableViolation{"associativity fails", Element(i), Element(j), Element(k)};
    return std::nullopt;
  }

  static FiniteGroup cyclic(std::size_t n) {
    if (n == 0) throw InvalidTable("cyclic group order must be positive");
    std::vector<Element> table(n * n);
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = std::to_string(i);
      for (std::size_t j = 0; j < n; ++j) table[i * n + j] = Element((i + j) % n);
    }
    return FiniteGroup(n, std::move(table), std::move(labels));
  }

  static constexpr std::size_t kMaxSymmetricDegree = 6;
  static constexpr std::size_t kMaxAlternatingDegree = 7;

  static FiniteGroup symmetric(std::size_t degree) {
    if (degree == 0 || degree > kMaxSymmetricDegree)
      throw OrderBoundExceeded("sym:<n> requires 1 <= n <= " + std::to_string(kMaxSymmetricDegree));
    return from_sorted_perms(all_perms(degree, false));
  }

  static FiniteGroup alternating(std::size_t degree) {
    if (degree == 0 || degree > kMaxAlternatingDegree)
      throw OrderBoundExceeded("alt:<n> requires 1 <= n <= " + std::to_string(kMaxAlternatingDegree));
    return from_sorted_perms(all_perms(degree, true));
  }

  /// Dihedral group of order 2n. Element e*n + a is r^a s^e, with s r = r^-1 s.
  static FiniteGroup dihedral(std::size_t n) {
    if (n == 0) throw InvalidTable("dihedral:<n> requires n >= 1");
    const std::size_t order = 2 * n;
    std::vector<Element> table(order * order);
    std::vector<std::string> labels(order);
    for (std::size_t x = 0; x < order; ++x) {
      const std::size_t a = x % n, e = x / n;
      std::string r = a == 0 ? "" : (a == 1 ? "r" : "r^" + std::to_string(a));
      if (e == 0) labels[x] = r.empty() ? "e" : r;
      else labels[x] = r.empty() ? "s" : r + " s";
      for (std::size_t y = 0; y < order; ++y) {
        const std::size_t b = y % n, f = y / n;
        const std::size_t rot = e == 0 ? (a + b) % n : (a + n - b) % n;
        table[x * order + y] = Element(((e + f) % 2) * n + rot);
      }
    }
    return FiniteGroup(order, std::move(table), std::move(labels));
  }

  /// Element (a, b) has index a * |right| + b.
  static FiniteGroup direct_product(const FiniteGroup& left, const FiniteGroup& right) {
    const std::size_t nl = left.order(), nr = right.order(), n = nl * nr;
    std::vector<Element> table(n * n);
    std::vector<std::string> labels(n);
    for (std::size_t x = 0; x < n; ++x) {
      labels[x] = "(" + left.label(Element(x / nr)) + "," + right.label(Element(x % nr)) + ")";
      for (std::size_t y = 0; y < n; ++y) {
        const Element a = left.mul(Element(x / nr), Element(y / nr));
        const Element b = right.mul(Element(x % nr), Element(y % nr));
        table[x * n + y] = Element(a * nr + b);
      }
    }
    return FiniteGroup(n, std::move(table), std::move(labels));
  }

  /// Closes the generators (images of 0..degree-1) and numbers the elements
  /// in lexicographic order of their image lists, so the identity comes first.
  static FiniteGroup from_permutations(const std::vector<std::vector<int>>& generators,
                                       std::size_t max_order = 5040) {
    if (generators.empty()) return cyclic(1);
    const std::size_t degree = generators.front().size();
    if (degree > 15) throw OrderBoundExceeded("permutation degree above 15 is not supported");
    detail::Perm identity(degree);
    std::iota(identity.begin(), identity.end(), 0);
    for (const auto& g : generators) {
      detail::Perm sorted = g;
      std::sort(sorted.begin(), sorted.end());
      if (g.size() != degree || sorted != identity)
        throw InvalidTable("generator is not a permutation of 0.." + std::to_string(degree - 1));
    }
    std::vector<detail::Perm> elements{identity};
    std::unordered_map<std::uint64_t, std::size_t> seen{{detail::perm_code(identity), 0}};
    for (std::size_t cursor = 0; cursor < elements.size(); ++cursor) {
      for (const auto& g : generators) {
        detail::Perm next = detail::compose(elements[cursor], g);
        if (seen.emplace(detail::perm_code(next), elements.size()).second) {
          elements.push_back(std::move(next));
          if (elements.size() > max_order)
            throw OrderBoundExceeded("permutation closure exceeds " + std::to_string(max_order));
        }
      }
    }
    std::sort(elements.begin(), elements.end());
    return from_sorted_perms(std::move(elements));
  }

  std::size_t order() const { return data_->n; }

  Element mul(Element a, Element b) const { return data_->table[std::size_t(a) * data_->n + b]; }
  Element inv(Element a) const { return data_->inverse[a]; }

  Element pow(Element a, std::int64_t k) const {
    if (k < 0) {
      a = inv(a);
      k = -k;
    }
    Element result = 0;
    while (k > 0) {
      if (k & 1) result = mul(result, a);
      a = mul(a, a);
      k >>= 1;
    }
    return result;
  }

  /// x^y = y^-1 x y
  Element conj(Element x, Element y) const { return mul(mul(inv(y), x), y); }
  /// a^-1 b^-1 a b
  Element commutator(Element a, Element b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

  std::size_t element_order(Element a) const {
    std::size_t k = 1;
    for (Element x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }

  /// lcm of element orders, computed once and shared between copies.
  std::uint64_t exponent() const {
    std::call_once(data_->exponent_once, [this] {
      std::uint64_t e = 1;
      for (Element g = 0; g < order(); ++g) e = std::lcm(e, std::uint64_t(element_order(g)));
      data_->exponent = e;
    });
    return data_->exponent;
  }

  bool is_abelian() const {
    for (Element a = 0; a < order(); ++a)
      for (Element b = a + 1; b < order(); ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  const std::string& label(Element a) const { return data_->labels[a]; }

  std::optional<Element> find_label(const std::string& text) const {
    auto it = data_->label_index.find(text);
    if (it == data_->label_index.end()) return std::nullopt;
    return it->second;
  }

  std::span<const Element> table() const { return data_->table; }

  bool same_as(const FiniteGroup& other) const { return data_ == other.data_; }

  void check_index(std::size_t a) const {
    if (a >= order())
      throw IndexOutOfRange("element index " + std::to_string(a) + " outside group of order " +
                            std::to_string(order()));
  }

 private:
  struct Data {
    std::size_t n = 0;
    std::vector<Element> table;
    std::vector<Element> inverse;
    std::vector<std::string> labels;
    std::unordered_map<std::string, Element> label_index;
    mutable std::once_flag exponent_once;
    mutable std::uint64_t exponent = 0;
  };

  FiniteGroup(std::size_t n, std::vector<Element> table, std::vector<std::string> labels) {
    auto data = std::make_shared<Data>();
    data->n = n;
    data->table = std::move(table);
    data->inverse.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (data->table[i * n + j] == 0) {
          data->inverse[i] = Element(j);
          break;
        }
    if (labels.size() != n) {
      labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
    }
    data->labels = std::move(labels);
    for (std::size_t i = 0; i < n; ++i) data->label_index.emplace(data->labels[i], Element(i));
    data_ = std::move(data);
  }

  static std::vector<detail::Perm> all_perms(std::size_t degree, bool even_only) {
    detail::Perm p(degree);
    std::iota(p.begin(), p.end(), 0);
    std::vector<detail::Perm> out;
    do {
      if (!even_only || detail::is_even(p)) out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  }

  static FiniteGroup from_sorted_perms(std::vector<detail::Perm> perms) {
    const std::size_t n = perms.size();
    std::unordered_map<std::uint64_t, Element> index;
    index.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) index.emplace(detail::perm_code(perms[i]), Element(i));
    std::vector<Element> table(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        table[i * n + j] = index.at(detail::perm_code(detail::compose(perms[i], perms[j])));
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = detail::cycle_label(perms[i]);
    return FiniteGroup(n, std::move(table), std::move(labels));
  }

  std::shared_ptr<const Data> data_;
};

/// A subgroup as a strictly sorted element set of a parent group.
class Subgroup {
 public:
  /// Checks that the set contains 0 and is closed; throws InvalidTable otherwise.
  static Subgroup from_elements(const FiniteGroup& parent, std::vector<Element> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    for (Element e : elements) parent.check_index(e);
    Subgroup s(parent, std::move(elements));
    if (!s.contains(0)) throw InvalidTable("subgroup must contain the identity");
    for (Element a : s.elements())
      for (Element b : s.elements())
        if (!s.contains(parent.mul(a, parent.inv(b))))
          throw InvalidTable("element set is not closed under the group operation");
    if (parent.order() % s.order() != 0) throw InvalidTable("subgroup order does not divide group order");
    return s;
  }

  /// Trusted constructor for algorithm output; elements must be sorted and closed.
  static Subgroup trusted(const FiniteGroup& parent, std::vector<Element> sorted_elements) {
    return Subgroup(parent, std::move(sorted_elements));
  }

  static Subgroup whole(const FiniteGroup& parent) {
    std::vector<Element> all(parent.order());
    std::iota(all.begin(), all.end(), Element(0));
    return Subgroup(parent, std::move(all));
  }

  static Subgroup trivial(const FiniteGroup& parent) { return Subgroup(parent, {0}); }

  const FiniteGroup& parent() const { return parent_; }
  std::span<const Element> elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }
  bool contains(Element g) const { return g < member_.size() && member_[g]; }
  bool is_whole() const { return order() == parent_.order(); }

  bool is_subset_of(const Subgroup& other) const {
    return std::all_of(elements_.begin(), elements_.end(), [&](Element g) { return other.contains(g); });
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.parent_.same_as(b.parent_) && a.elements_ == b.elements_;
  }

  /// Ordering by (size, element set) used for lattice listings.
  friend bool operator<(const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements_ < b.elements_;
  }

 private:
  Subgroup(const FiniteGroup& parent, std::vector<Element> elements)
      : parent_(parent), elements_(std::move(elements)), member_(parent.order(), 0) {
    for (Element e : elements_) member_[e] = 1;
  }

  FiniteGroup parent_;
  std::vector<Element> elements_;
  std::vector<char> member_;
};

}  // namespace homdiv
