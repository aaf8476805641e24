#pragma once

// Text specs for groups and rings, and the Cayley-table file format.
//
//   group: cyclic:<n> | sym:<n> | alt:<n> | dihedral:<n> | prod:<spec>,<spec>
//          | cayley:<path> | units:<ring-spec>
//   ring:  zmod:<n> | mat:<k>:zmod:<n> | prod:<spec>;<spec>
//
// Nested products may be grouped with parentheses, e.g.
// prod:(prod:cyclic:2,cyclic:2),cyclic:3. Without parentheses a product with
// more than two parts associates to the left.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "homdiv/errors.hpp"
#include "homdiv/group.hpp"
#include "homdiv/ring.hpp"

namespace homdiv {

namespace detail {

inline std::int64_t spec_int(std::string_view text, std::string_view spec) {
  if (text.empty() || text.size() > 12) throw ParseError("bad number in spec '" + std::string(spec) + "'");
  std::int64_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw ParseError("bad number in spec '" + std::string(spec) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

inline std::string_view strip_parens(std::string_view s) {
  while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    bool wraps = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      depth += s[i] == '(' ? 1 : s[i] == ')' ? -1 : 0;
      if (depth == 0 && i + 1 < s.size()) {
        wraps = false;
        break;
      }
    }
    if (!wraps) break;
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

inline std::vector<std::string_view> split_top(std::string_view s, char sep, std::string_view spec) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')' && --depth < 0) throw ParseError("unbalanced parentheses in '" + std::string(spec) + "'");
    else if (s[i] == sep && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced parentheses in '" + std::string(spec) + "'");
  parts.push_back(s.substr(start));
  for (auto p : parts)
    if (p.empty()) throw ParseError("empty component in '" + std::string(spec) + "'");
  return parts;
}

inline bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

}  // namespace detail

/// Reads a Cayley table: line 1 is n, then n rows of n indices.
inline FiniteGroup read_cayley_table(std::istream& in, const std::string& source = "<stream>") {
  long long n = 0;
  if (!(in >> n) || n <= 0) throw ParseError(source + ": first line must be a positive order");
  if (n > 5040) throw OrderBoundExceeded(source + ": order " + std::to_string(n) + " exceeds 5040");
  std::vector<Element> table(std::size_t(n * n));
  for (auto& entry : table) {
    long long v = 0;
    if (!(in >> v)) throw ParseError(source + ": expected " + std::to_string(n * n) + " table entries");
    if (v < 0 || v >= n) throw InvalidTable(source + ": entry " + std::to_string(v) + " out of range");
    entry = Element(v);
  }
  std::string rest;
  if (in >> rest) throw ParseError(source + ": trailing data after the table");
  return FiniteGroup::from_table(std::size_t(n), std::move(table));
}

inline FiniteGroup read_cayley_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open Cayley table file " + path.string());
  return read_cayley_table(in, path.string());
}

inline FiniteRing build_ring(std::string_view spec, std::uint64_t cardinality_bound = kDefaultCardinalityBound) {
  const std::string_view s = detail::strip_parens(spec);
  FiniteRing r = [&] {
    if (detail::starts_with(s, "zmod:")) return FiniteRing::modular(detail::spec_int(s.substr(5), spec));
    if (detail::starts_with(s, "mat:")) {
      const auto rest = s.substr(4);
      const auto colon = rest.find(':');
      if (colon == std::string_view::npos || !detail::starts_with(rest.substr(colon + 1), "zmod:"))
        throw ParseError("expected mat:<k>:zmod:<n>, got '" + std::string(spec) + "'");
      return FiniteRing::matrix(std::size_t(detail::spec_int(rest.substr(0, colon), spec)),
                                detail::spec_int(rest.substr(colon + 6), spec));
    }
    if (detail::starts_with(s, "prod:")) {
      std::vector<FiniteRing> parts;
      for (auto p : detail::split_top(s.substr(5), ';', spec)) parts.push_back(build_ring(p, cardinality_bound));
      if (parts.size() < 2) throw ParseError("prod: needs at least two ring specs in '" + std::string(spec) + "'");
      return FiniteRing::product(std::move(parts));
    }
    throw ParseError("unknown ring spec '" + std::string(spec) + "'");
  }();
  if (!r.cardinality_within(cardinality_bound))
    throw CardinalityBoundExceeded("ring " + r.describe() + " exceeds the cardinality bound " +
                                   std::to_string(cardinality_bound));
  return r;
}

/// `cayley:` paths are resolved against `base_dir` when relative.
inline FiniteGroup build_group(std::string_view spec, const std::filesystem::path& base_dir = {},
                               std::uint64_t cardinality_bound = kDefaultCardinalityBound) {
  const std::string_view s = detail::strip_parens(spec);
  auto number = [&](std::size_t prefix) { return std::size_t(detail::spec_int(s.substr(prefix), spec)); };
  if (detail::starts_with(s, "cyclic:")) return FiniteGroup::cyclic(number(7));
  if (detail::starts_with(s, "sym:")) return FiniteGroup::symmetric(number(4));
  if (detail::starts_with(s, "alt:")) return FiniteGroup::alternating(number(4));
  if (detail::starts_with(s, "dihedral:")) return FiniteGroup::dihedral(number(9));
  if (detail::starts_with(s, "units:")) return units_group(build_ring(s.substr(6), cardinality_bound), cardinality_bound).group;
  if (detail::starts_with(s, "cayley:")) {
    std::filesystem::path p{std::string(s.substr(7))};
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return read_cayley_file(p);
  }
  if (detail::starts_with(s, "prod:")) {
    const auto parts = detail::split_top(s.substr(5), ',', spec);
    if (parts.size() < 2) throw ParseError("prod: needs at least two group specs in '" + std::string(spec) + "'");
    FiniteGroup g = build_group(parts[0], base_dir, cardinality_bound);
    for (std::size_t i = 1; i < parts.size(); ++i)
      g = FiniteGroup::direct_product(g, build_group(parts[i], base_dir, cardinality_bound));
    return g;
  }
  throw ParseError("unknown group spec '" + std::string(spec) + "'");
}

}  // namespace homdiv
