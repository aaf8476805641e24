#pragma once

/**
 * @file ring.hpp
 * @brief Finite associative unital rings: Z/n, k x k matrices over Z/n, and
 *        finite products, with unit groups materialized as Cayley tables.
 *
 * Elements are fixed-length residue vectors. A matrix element is stored row
 * major; a product element is the concatenation of its components.
 */

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "homdiv/errors.hpp"
#include "homdiv/group.hpp"
#include "homdiv/integer_matrix.hpp"
#include "homdiv/subgroups.hpp"

namespace homdiv {

using RingElement = std::vector<std::int64_t>;

inline constexpr std::uint64_t kDefaultCardinalityBound = 4096;

namespace detail {

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
  a %= n;
  return a < 0 ? a + n : a;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return std::int64_t((__int128(a) * b) % n);
}

inline std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t n) {
  if (n == 1) return 0;
  const auto [g, u, v] = extended_gcd(mod(a, n), n);
  (void)v;
  if (g != 1) return std::nullopt;
  return mod(u, n);
}

// Square matrix over Z/n, row major.
inline std::int64_t det_mod(std::span<const std::int64_t> m, std::size_t k, std::int64_t n) {
  if (k == 0) return mod(1, n);
  if (k == 1) return mod(m[0], n);
  std::int64_t total = 0;
  std::vector<std::int64_t> minor((k - 1) * (k - 1));
  for (std::size_t col = 0; col < k; ++col) {
    if (m[col] == 0) continue;
    std::size_t w = 0;
    for (std::size_t r = 1; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        if (c != col) minor[w++] = m[r * k + c];
    const std::int64_t term = mulmod(m[col], det_mod(minor, k - 1, n), n);
    total = mod(col % 2 == 0 ? total + term : total - term, n);
  }
  return total;
}

}  // namespace detail

class FiniteRing {
 public:
  enum class Kind { Modular, Matrix, Product };

  static FiniteRing modular(std::int64_t n) {
    if (n < 1) throw ParseError("zmod:<n> requires n >= 1");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Modular;
    node->modulus = n;
    node->width = 1;
    node->radix = {n};
    return FiniteRing(std::move(node));
  }

  static FiniteRing matrix(std::size_t k, std::int64_t n) {
    if (k < 1) throw ParseError("mat:<k>:zmod:<n> requires k >= 1");
    if (n < 1) throw ParseError("mat:<k>:zmod:<n> requires n >= 1");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Matrix;
    node->modulus = n;
    node->dimension = k;
    node->width = k * k;
    node->radix.assign(k * k, n);
    return FiniteRing(std::move(node));
  }

  static FiniteRing product(std::vector<FiniteRing> parts) {
    if (parts.size() < 2) throw ParseError("a product ring needs at least two components");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Product;
    for (const auto& p : parts) {
      node->offsets.push_back(node->width);
      node->width += p.width();
      node->radix.insert(node->radix.end(), p.node_->radix.begin(), p.node_->radix.end());
    }
    node->components = std::move(parts);
    return FiniteRing(std::move(node));
  }

  Kind kind() const { return node_->kind; }
  std::int64_t modulus() const { return node_->modulus; }
  std::size_t dimension() const { return node_->dimension; }
  const std::vector<FiniteRing>& components() const { return node_->components; }
  std::size_t width() const { return node_->width; }

  /// Number of elements, or nullopt when it exceeds `bound`.
  std::optional<std::uint64_t> cardinality_within(std::uint64_t bound) const {
    std::uint64_t c = 1;
    for (auto r : node_->radix) {
      if (__builtin_mul_overflow(c, std::uint64_t(r), &c) || c > bound) return std::nullopt;
    }
    return c;
  }

  std::uint64_t cardinality() const {
    auto c = cardinality_within(~std::uint64_t(0));
    if (!c) throw CardinalityBoundExceeded("ring cardinality overflows 64 bits");
    return *c;
  }

  std::string describe() const {
    switch (kind()) {
      case Kind::Modular: return "zmod:" + std::to_string(modulus());
      case Kind::Matrix: return "mat:" + std::to_string(dimension()) + ":zmod:" + std::to_string(modulus());
      case Kind::Product: {
        std::string s = "prod:";
        for (std::size_t i = 0; i < components().size(); ++i) {
          const auto inner = components()[i].describe();
          if (i) s += ';';
          s += components()[i].kind() == Kind::Product ? "(" + inner + ")" : inner;
        }
        return s;
      }
    }
    return {};
  }

  RingElement zero() const { return RingElement(width(), 0); }
  RingElement one() const { return from_integer(1); }

  /// The image of an integer under Z -> R.
  RingElement from_integer(std::int64_t v) const {
    RingElement r(width(), 0);
    fill_integer(r, v);
    return r;
  }

  RingElement add(const RingElement& a, const RingElement& b) const {
    RingElement r(width());
    for (std::size_t i = 0; i < width(); ++i) r[i] = detail::mod(a[i] + b[i], node_->radix[i]);
    return r;
  }

  RingElement neg(const RingElement& a) const {
    RingElement r(width());
    for (std::size_t i = 0; i < width(); ++i) r[i] = detail::mod(-a[i], node_->radix[i]);
    return r;
  }

  RingElement sub(const RingElement& a, const RingElement& b) const { return add(a, neg(b)); }

  RingElement mul(const RingElement& a, const RingElement& b) const {
    RingElement r(width(), 0);
    mul_into(a, b, r);
    return r;
  }

  bool is_zero(const RingElement& a) const {
    return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
  }

  /// Throws ParseError unless `a` has the right width and reduced residues.
  void check(const RingElement& a) const {
    if (a.size() != width()) throw ParseError("ring element has the wrong shape for " + describe());
    for (std::size_t i = 0; i < width(); ++i)
      if (a[i] < 0 || a[i] >= node_->radix[i]) throw ParseError("ring element residue out of range for " + describe());
  }

  /// Mixed-radix index in [0, cardinality).
  std::uint64_t index_of(const RingElement& a) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < width(); ++i) idx = idx * std::uint64_t(node_->radix[i]) + std::uint64_t(a[i]);
    return idx;
  }

  RingElement element_at(std::uint64_t idx) const {
    RingElement r(width());
    for (std::size_t i = width(); i-- > 0;) {
      r[i] = std::int64_t(idx % std::uint64_t(node_->radix[i]));
      idx /= std::uint64_t(node_->radix[i]);
    }
    return r;
  }

  /// Two-sided inverse: extended gcd for Z/n, determinant and adjugate for
  /// matrices, componentwise for products.
  std::optional<RingElement> try_inverse(const RingElement& a) const {
    RingElement r(width(), 0);
    if (!inverse_into(a, r)) return std::nullopt;
    return r;
  }

  /// Literal text, valid JSON: `3`, `[[1,1],[0,1]]`, `[1,2]` for products.
  std::string format(const RingElement& a) const {
    std::ostringstream out;
    format_into(out, a);
    return out.str();
  }

  friend bool operator==(const FiniteRing& a, const FiniteRing& b) { return a.describe() == b.describe(); }

 private:
  struct Node {
    Kind kind = Kind::Modular;
    std::int64_t modulus = 1;
    std::size_t dimension = 0;
    std::size_t width = 0;
    std::vector<FiniteRing> components;
    std::vector<std::size_t> offsets;
    std::vector<std::int64_t> radix;
  };

  explicit FiniteRing(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  void fill_integer(std::span<std::int64_t> out, std::int64_t v) const {
    switch (kind()) {
      case Kind::Modular: out[0] = detail::mod(v, modulus()); break;
      case Kind::Matrix:
        for (std::size_t i = 0; i < dimension(); ++i) out[i * dimension() + i] = detail::mod(v, modulus());
        break;
      case Kind::Product:
        for (std::size_t c = 0; c < components().size(); ++c)
          components()[c].fill_integer(out.subspan(node_->offsets[c], components()[c].width()), v);
        break;
    }
  }

  void mul_into(std::span<const std::int64_t> a, std::span<const std::int64_t> b, std::span<std::int64_t> out) const {
    switch (kind()) {
      case Kind::Modular: out[0] = detail::mulmod(a[0], b[0], modulus()); break;
      case Kind::Matrix: {
        const std::size_t k = dimension();
        const std::int64_t n = modulus();
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) {
            std::int64_t s = 0;
            for (std::size_t l = 0; l < k; ++l) s = (s + detail::mulmod(a[i * k + l], b[l * k + j], n)) % n;
            out[i * k + j] = s;
          }
        break;
      }
      case Kind::Product:
        for (std::size_t c = 0; c < components().size(); ++c) {
          const auto off = node_->offsets[c];
          const auto w = components()[c].width();
          components()[c].mul_into(a.subspan(off, w), b.subspan(off, w), out.subspan(off, w));
        }
        break;
    }
  }

  bool inverse_into(std::span<const std::int64_t> a, std::span<std::int64_t> out) const {
    switch (kind()) {
      case Kind::Modular: {
        auto inv = detail::inverse_mod(a[0], modulus());
        if (!inv) return false;
        out[0] = *inv;
        return true;
      }
      case Kind::Matrix: {
        const std::size_t k = dimension();
        const std::int64_t n = modulus();
        auto det_inv = detail::inverse_mod(detail::det_mod(a, k, n), n);
        if (!det_inv) return false;
        if (k == 1) {
          out[0] = *det_inv;
          return true;
        }
        std::vector<std::int64_t> minor((k - 1) * (k - 1));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) {
            std::size_t w = 0;
            for (std::size_t r = 0; r < k; ++r)
              for (std::size_t c = 0; c < k; ++c)
                if (r != i && c != j) minor[w++] = a[r * k + c];
            std::int64_t cof = detail::det_mod(minor, k - 1, n);
            if ((i + j) % 2 == 1) cof = detail::mod(-cof, n);
            out[j * k + i] = detail::mulmod(cof, *det_inv, n);
          }
        return true;
      }
      case Kind::Product:
        for (std::size_t c = 0; c < components().size(); ++c) {
          const auto off = node_->offsets[c];
          const auto w = components()[c].width();
          if (!components()[c].inverse_into(a.subspan(off, w), out.subspan(off, w))) return false;
        }
        return true;
    }
    return false;
  }

  void format_into(std::ostream& out, std::span<const std::int64_t> a) const {
    switch (kind()) {
      case Kind::Modular: out << a[0]; break;
      case Kind::Matrix: {
        const std::size_t k = dimension();
        out << '[';
        for (std::size_t i = 0; i < k; ++i) {
          if (i) out << ',';
          out << '[';
          for (std::size_t j = 0; j < k; ++j) out << (j ? "," : "") << a[i * k + j];
          out << ']';
        }
        out << ']';
        break;
      }
      case Kind::Product:
        out << '[';
        for (std::size_t c = 0; c < components().size(); ++c) {
          if (c) out << ',';
          components()[c].format_into(out, a.subspan(node_->offsets[c], components()[c].width()));
        }
        out << ']';
        break;
    }
  }

  std::shared_ptr<const Node> node_;
};

/// R* as a Cayley-table group. Index 0 is the ring's one; the remaining units
/// follow in ascending ring index.
struct UnitGroup {
  FiniteRing ring;
  FiniteGroup group;
  std::vector<RingElement> to_ring;
  std::unordered_map<std::uint64_t, Element> by_ring_index;

  std::optional<Element> from_ring(const RingElement& r) const {
    auto it = by_ring_index.find(ring.index_of(r));
    if (it == by_ring_index.end()) return std::nullopt;
    return it->second;
  }
};

inline UnitGroup units_group(const FiniteRing& r, std::uint64_t bound = kDefaultCardinalityBound) {
  const auto card = r.cardinality_within(bound);
  if (!card) throw CardinalityBoundExceeded(r.describe() + " exceeds the cardinality bound " + std::to_string(bound));
  const RingElement one = r.one();
  std::vector<RingElement> units{one};
  const std::uint64_t one_idx = r.index_of(one);
  for (std::uint64_t i = 0; i < *card; ++i) {
    if (i == one_idx) continue;
    auto x = r.element_at(i);
    if (r.try_inverse(x)) units.push_back(std::move(x));
  }
  std::unordered_map<std::uint64_t, Element> index;
  for (std::size_t i = 0; i < units.size(); ++i) index.emplace(r.index_of(units[i]), Element(i));
  const std::size_t n = units.size();
  std::vector<Element> table(n * n);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = r.format(units[i]);
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = index.at(r.index_of(r.mul(units[i], units[j])));
  }
  auto group = FiniteGroup::from_trusted_table(n, std::move(table), std::move(labels));
  return UnitGroup{r, std::move(group), std::move(units), std::move(index)};
}

/// {g in G : g c = c g for every coefficient c}.
inline Subgroup multiplicative_centralizer(const UnitGroup& units, std::span<const RingElement> coefficients,
                                           const Subgroup& g) {
  if (!g.parent().same_as(units.group)) throw ForeignSubgroup("subgroup is not a subgroup of this unit group");
  const auto& r = units.ring;
  std::vector<Element> out;
  for (Element x : g.elements()) {
    const auto& u = units.to_ring[x];
    if (std::all_of(coefficients.begin(), coefficients.end(),
                    [&](const RingElement& c) { return r.mul(u, c) == r.mul(c, u); }))
      out.push_back(x);
  }
  return Subgroup::trusted(units.group, std::move(out));
}

}  // namespace homdiv
