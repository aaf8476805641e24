#pragma once

// Words over a finite alphabet of generators. Words are not freely reduced
// unless reduced() is called explicitly.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "homdiv/errors.hpp"
#include "homdiv/integer_matrix.hpp"

namespace homdiv {

struct Letter {
  std::size_t generator = 0;
  std::int64_t exponent = 1;
  friend bool operator==(const Letter&, const Letter&) = default;
};

struct Word {
  std::vector<Letter> letters;

  Word() = default;
  Word(std::initializer_list<Letter> ls) : letters(ls) {}
  explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}

  static Word generator(std::size_t g, std::int64_t exponent = 1) { return Word{{g, exponent}}; }

  bool empty() const { return letters.empty(); }

  Word inverse() const {
    Word w;
    w.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back({it->generator, -it->exponent});
    return w;
  }

  Word power(std::int64_t k) const {
    const Word base = k < 0 ? inverse() : *this;
    Word w;
    for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) w.letters.insert(w.letters.end(), base.letters.begin(), base.letters.end());
    return w;
  }

  /// Free reduction: merges adjacent letters on the same generator and drops
  /// zero exponents.
  Word reduced() const {
    std::vector<Letter> stack;
    for (const auto& l : letters) {
      if (l.exponent == 0) continue;
      if (!stack.empty() && stack.back().generator == l.generator) {
        stack.back().exponent += l.exponent;
        if (stack.back().exponent == 0) stack.pop_back();
      } else {
        stack.push_back(l);
      }
    }
    return Word(std::move(stack));
  }

  /// Exponent sum per generator, length `generators`.
  IntVector exponent_sums(std::size_t generators) const {
    IntVector sums(generators, 0);
    for (const auto& l : letters) {
      if (l.generator >= generators) throw IndexOutOfRange("generator index out of range in word");
      sums[l.generator] += l.exponent;
    }
    return sums;
  }

  std::int64_t degree(std::span<const std::int64_t> degrees) const {
    std::int64_t d = 0;
    for (const auto& l : letters) d += l.exponent * degrees[l.generator];
    return d;
  }

  /// Largest generator index used, or -1 for the empty word.
  std::int64_t max_generator() const {
    std::int64_t m = -1;
    for (const auto& l : letters) m = std::max(m, std::int64_t(l.generator));
    return m;
  }

  friend bool operator==(const Word&, const Word&) = default;
};

inline Word operator*(const Word& a, const Word& b) {
  Word w = a;
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return w;
}

/// Text form: space separated `name` or `name^k` tokens; `1` is the empty word.
inline std::string format_word(const Word& w, std::span<const std::string> names) {
  if (w.empty()) return "1";
  std::ostringstream out;
  bool first = true;
  for (const auto& l : w.letters) {
    if (!first) out << ' ';
    first = false;
    out << names[l.generator];
    if (l.exponent != 1) out << '^' << l.exponent;
  }
  return out.str();
}

/// Parses `x0^2 x1^-1 a`. Tokens may be separated by whitespace or `*`.
inline Word parse_word(std::string_view text, std::span<const std::string> names) {
  Word w;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*')) ++i;
  };
  skip();
  while (i < text.size()) {
    const std::size_t start = i;
    if (text[i] == '1' && (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '*')) {
      ++i;
      skip();
      continue;
    }
    if (!(std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      throw ParseError("unexpected character '" + std::string(1, text[i]) + "' in word \"" + std::string(text) + "\"");
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
    const std::string name(text.substr(start, i - start));
    std::size_t gen = names.size();
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) gen = k;
    if (gen == names.size()) throw ParseError("unknown generator '" + name + "' in word \"" + std::string(text) + "\"");
    std::int64_t exponent = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      const std::size_t estart = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      const std::string digits(text.substr(estart, i - estart));
      try {
        std::size_t used = 0;
        exponent = std::stoll(digits, &used);
        if (used != digits.size()) throw std::invalid_argument(digits);
      } catch (const std::exception&) {
        throw ParseError("bad exponent '" + digits + "' in word \"" + std::string(text) + "\"");
      }
    }
    if (exponent == 0) throw ParseError("zero exponent in word \"" + std::string(text) + "\"");
    w.letters.push_back({gen, exponent});
    skip();
  }
  return w;
}

}  // namespace homdiv
