#pragma once

/**
 * @file presentation.hpp
 * @brief Finitely presented indexed groups.
 *
 * An indexed presentation carries an integer degree per generator such that
 * every relator has total degree zero and the degrees have gcd 1, so the
 * degree map is an epimorphism onto the integers. Constants of a target group
 * ("coefficients") are extra degree-zero generators with fixed images.
 *
 * The semidirect flavor presents Z x| K for a finite group K and an
 * automorphism alpha of K: generator 0 is t (degree 1) and the remaining
 * generators are a greedy generating set of K (degree 0). Relators are the
 * Cayley-graph relations of K together with t^-1 k t = alpha(k).
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "homdiv/errors.hpp"
#include "homdiv/group.hpp"
#include "homdiv/integer_matrix.hpp"
#include "homdiv/subgroups.hpp"
#include "homdiv/word.hpp"

namespace homdiv {

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  /// Either empty (no fixed images) or one entry per generator.
  std::vector<std::optional<Element>> fixed_images;
  /// Group the fixed images live in; required when any image is fixed.
  std::optional<FiniteGroup> coefficient_group;

  std::size_t generator_count() const { return generators.size(); }

  bool is_fixed(std::size_t g) const { return !fixed_images.empty() && fixed_images[g].has_value(); }

  static std::vector<std::string> default_names(std::size_t m, const std::string& prefix = "x") {
    std::vector<std::string> names(m);
    for (std::size_t i = 0; i < m; ++i) names[i] = prefix + std::to_string(i);
    return names;
  }
};

struct SemidirectData {
  FiniteGroup base;
  std::vector<Element> automorphism;
  /// Elements of K assigned to generators 1..r.
  std::vector<Element> base_generators;
  /// Breadth-first representative word (over F's generators) of each K element.
  std::vector<Word> element_words;
};

/// Primitive vector in the common kernel of `rows` (each of length m), the
/// deterministic first kernel basis vector. nullopt when the kernel is zero.
inline std::optional<IntVector> derive_degree(const std::vector<IntVector>& rows, std::size_t m) {
  return integer_rank_and_kernel(IntMatrix{m, rows}).kernel;
}

/// Word x_0^a_0 ... x_{m-1}^a_{m-1} of total degree 1, coefficients from the
/// iterated extended gcd.
inline Word degree_one_word(std::span<const std::int64_t> degrees) {
  IntVector coeffs(degrees.size(), 0);
  std::int64_t g = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const auto [next, u, v] = extended_gcd(g, degrees[i]);
    for (std::size_t j = 0; j < i; ++j) coeffs[j] = detail::checked_mul(coeffs[j], u);
    coeffs[i] = v;
    g = next;
  }
  if (g != 1) throw NotIndexable("degree vector is not primitive");
  Word t;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    if (coeffs[i] != 0) t.letters.push_back({i, coeffs[i]});
  return t;
}

/// z_i = x_i t^-d_i (freely reduced); each has degree zero and their
/// conjugates by powers of t generate the degree kernel.
inline std::vector<Word> kernel_generator_words(std::span<const std::int64_t> degrees, const Word& t) {
  std::vector<Word> out;
  out.reserve(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i) out.push_back((Word::generator(i) * t.power(-degrees[i])).reduced());
  return out;
}

class IndexedPresentation {
 public:
  using Ptr = std::shared_ptr<const IndexedPresentation>;

  static Ptr create(Presentation p, IntVector degrees, std::optional<SemidirectData> sd = std::nullopt) {
    const std::size_t m = p.generator_count();
    if (m == 0) throw NotIndexable("presentation has no generators");
    if (degrees.size() != m) throw ParseError("degree vector length does not match generator count");
    if (!p.fixed_images.empty() && p.fixed_images.size() != m)
      throw ParseError("fixed image list length does not match generator count");
    if (detail::content(degrees) != 1) throw NotIndexable("degree vector must have gcd 1");
    for (const auto& r : p.relators) {
      if (r.max_generator() >= std::int64_t(m)) throw IndexOutOfRange("relator uses an undefined generator");
      if (r.degree(degrees) != 0) throw NotIndexable("relator " + format_word(r, p.generators) + " has nonzero degree");
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (!p.is_fixed(i)) continue;
      if (!p.coefficient_group) throw ParseError("fixed images require a coefficient group");
      p.coefficient_group->check_index(*p.fixed_images[i]);
      if (degrees[i] != 0) throw NotIndexable("generator " + p.generators[i] + " has a fixed image but nonzero degree");
    }
    auto out = std::shared_ptr<IndexedPresentation>(new IndexedPresentation());
    out->presentation_ = std::move(p);
    out->degrees_ = std::move(degrees);
    out->t_ = homdiv::degree_one_word(out->degrees_);
    out->kernel_words_ = homdiv::kernel_generator_words(out->degrees_, out->t_);
    out->sd_ = std::move(sd);
    return out;
  }

  /// Degrees from the kernel of the relator exponent sums, unit rows for
  /// fixed-image generators, and exponent sums of `zero_degree_words`.
  static Ptr derive(Presentation p, const std::vector<Word>& zero_degree_words = {}) {
    auto d = derive_degree(degree_rows(p, zero_degree_words), p.generator_count());
    if (!d) throw NotIndexable("no epimorphism onto Z satisfies the relators and constraints");
    return create(std::move(p), std::move(*d));
  }

  static std::vector<IntVector> degree_rows(const Presentation& p, const std::vector<Word>& zero_degree_words = {}) {
    const std::size_t m = p.generator_count();
    std::vector<IntVector> rows;
    for (const auto& r : p.relators) rows.push_back(r.exponent_sums(m));
    for (std::size_t i = 0; i < m; ++i)
      if (p.is_fixed(i)) {
        IntVector unit(m, 0);
        unit[i] = 1;
        rows.push_back(std::move(unit));
      }
    for (const auto& w : zero_degree_words) rows.push_back(w.exponent_sums(m));
    return rows;
  }

  /// Free group of the given rank, generators x0.., degrees (1, 0, ..., 0)
  /// unless given.
  static Ptr free(std::size_t rank, IntVector degrees = {}) {
    Presentation p;
    p.generators = Presentation::default_names(rank);
    if (degrees.empty()) return derive(std::move(p));
    return create(std::move(p), std::move(degrees));
  }

  /// Z x| K where t^-1 k t = automorphism[k].
  static Ptr semidirect(const FiniteGroup& base, std::vector<Element> automorphism) {
    const std::size_t n = base.order();
    if (automorphism.size() != n) throw ParseError("automorphism must list one image per element of K");
    std::vector<char> hit(n, 0);
    for (Element x : automorphism) {
      base.check_index(x);
      if (hit[x]) throw ParseError("automorphism is not a bijection");
      hit[x] = 1;
    }
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        if (automorphism[base.mul(a, b)] != base.mul(automorphism[a], automorphism[b]))
          throw ParseError("automorphism does not preserve the multiplication table");

    SemidirectData sd{base, std::move(automorphism), greedy_generators(base), {}};
    const std::size_t r = sd.base_generators.size();
    Presentation p;
    p.generators.push_back("t");
    for (std::size_t j = 0; j < r; ++j) p.generators.push_back("k" + std::to_string(j));

    // Breadth-first spanning tree of the Cayley graph of K.
    sd.element_words.assign(n, Word{});
    std::vector<char> reached(n, 0);
    reached[0] = 1;
    std::vector<Element> queue{0};
    for (std::size_t cursor = 0; cursor < queue.size(); ++cursor) {
      const Element a = queue[cursor];
      for (std::size_t j = 0; j < r; ++j) {
        const Element b = base.mul(a, sd.base_generators[j]);
        if (reached[b]) continue;
        reached[b] = 1;
        sd.element_words[b] = sd.element_words[a] * Word::generator(j + 1);
        queue.push_back(b);
      }
    }
    for (Element a : queue)
      for (std::size_t j = 0; j < r; ++j) {
        const Element b = base.mul(a, sd.base_generators[j]);
        Word rel = (sd.element_words[a] * Word::generator(j + 1) * sd.element_words[b].inverse()).reduced();
        if (!rel.empty()) p.relators.push_back(std::move(rel));
      }
    for (std::size_t j = 0; j < r; ++j) {
      const Element image = sd.automorphism[sd.base_generators[j]];
      Word rel = (Word::generator(0, -1) * Word::generator(j + 1) * Word::generator(0) *
                  sd.element_words[image].inverse())
                     .reduced();
      if (!rel.empty()) p.relators.push_back(std::move(rel));
    }
    IntVector degrees(r + 1, 0);
    degrees[0] = 1;
    return create(std::move(p), std::move(degrees), std::move(sd));
  }

  const Presentation& presentation() const { return presentation_; }
  std::size_t generator_count() const { return presentation_.generator_count(); }
  const std::vector<std::string>& names() const { return presentation_.generators; }
  const std::vector<Word>& relators() const { return presentation_.relators; }
  const IntVector& degrees() const { return degrees_; }
  bool is_fixed(std::size_t g) const { return presentation_.is_fixed(g); }
  std::optional<Element> fixed_image(std::size_t g) const {
    return is_fixed(g) ? presentation_.fixed_images[g] : std::nullopt;
  }
  const Word& degree_one_word() const { return t_; }
  const std::vector<Word>& kernel_generator_words() const { return kernel_words_; }
  const std::optional<SemidirectData>& semidirect_data() const { return sd_; }

  /// Word for an element of K (semidirect flavor only).
  const Word& base_element_word(Element k) const {
    if (!sd_) throw ParseError("presentation is not of semidirect flavor");
    sd_->base.check_index(k);
    return sd_->element_words[k];
  }

 private:
  IndexedPresentation() = default;

  Presentation presentation_;
  IntVector degrees_;
  Word t_;
  std::vector<Word> kernel_words_;
  std::optional<SemidirectData> sd_;
};

inline Word degree_one_word(const IndexedPresentation& p) { return p.degree_one_word(); }
inline std::vector<Word> kernel_generator_words(const IndexedPresentation& p) { return p.kernel_generator_words(); }

}  // namespace homdiv
