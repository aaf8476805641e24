#pragma once

/**
 * @file homomorphisms.hpp
 * @brief Homomorphism enumeration from finitely presented groups into
 *        Cayley-table groups, under constraint predicates.
 *
 * A homomorphism is a tuple of generator images satisfying all relators.
 * Enumeration walks the image tuples in lexicographic order. Two modes are
 * provided: Filter evaluates everything on complete assignments; Prune checks
 * each relator (and membership constraint) as soon as the generators it uses
 * are assigned. Both return identical lists.
 */

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "homdiv/errors.hpp"
#include "homdiv/group.hpp"
#include "homdiv/presentation.hpp"
#include "homdiv/subgroups.hpp"
#include "homdiv/word.hpp"

namespace homdiv {

/// Left-to-right product of image powers.
inline Element evaluate_word(const FiniteGroup& g, std::span<const Element> images, const Word& w) {
  Element acc = 0;
  for (const auto& l : w.letters) acc = g.mul(acc, g.pow(images[l.generator], l.exponent));
  return acc;
}

// ---------------------------------------------------------------------------
// Constraints

/// phi(w) in H for every word.
struct SubsetInSubgroup {
  std::vector<Word> words;
  Subgroup subgroup;
};

struct DoubleCosetTarget {
  Word word;
  Subgroup subgroup;
  Element representative = 0;
};

/// phi(w) in H g_w H for every listed word.
struct SubsetInDoubleCosets {
  std::vector<DoubleCosetTarget> targets;
};

/// The subgroup generated by the images of `generators` equals `subgroup`.
struct ImageEquals {
  std::vector<Word> generators;
  Subgroup subgroup;
};

/// The words name pairwise-distinct elements of F; their images must be
/// pairwise distinct.
struct InjectiveOnElements {
  std::vector<Word> words;
};

/// The images generate the whole target.
struct Surjective {};

using Constraint = std::variant<SubsetInSubgroup, SubsetInDoubleCosets, ImageEquals, InjectiveOnElements, Surjective>;
using ConstraintSet = std::vector<Constraint>;

/// H g H as a membership mask.
inline std::vector<char> double_coset_mask(const Subgroup& h, Element g) {
  const auto& G = h.parent();
  G.check_index(g);
  std::vector<char> mask(G.order(), 0);
  for (Element a : h.elements())
    for (Element b : h.elements()) mask[G.mul(G.mul(a, g), b)] = 1;
  return mask;
}

enum class EnumerationMode { Filter, Prune };

struct EnumerationOptions {
  EnumerationMode mode = EnumerationMode::Prune;
  unsigned workers = 1;
};

namespace detail {

// Constraints precompiled against a target group.
class CompiledConstraints {
 public:
  struct Membership {
    Word word;
    std::vector<char> mask;
  };

  CompiledConstraints(const FiniteGroup& g, const ConstraintSet& set) : group_(g) {
    auto own = [&](const Subgroup& s) {
      if (!s.parent().same_as(g)) throw ForeignSubgroup("constraint subgroup does not live in the target group");
    };
    for (const auto& c : set) {
      if (const auto* s = std::get_if<SubsetInSubgroup>(&c)) {
        own(s->subgroup);
        std::vector<char> mask(g.order(), 0);
        for (Element e : s->subgroup.elements()) mask[e] = 1;
        for (const auto& w : s->words) membership_.push_back({w, mask});
      } else if (const auto* d = std::get_if<SubsetInDoubleCosets>(&c)) {
        for (const auto& t : d->targets) {
          own(t.subgroup);
          membership_.push_back({t.word, double_coset_mask(t.subgroup, t.representative)});
        }
      } else if (const auto* ie = std::get_if<ImageEquals>(&c)) {
        own(ie->subgroup);
        image_equals_.push_back(*ie);
      } else if (const auto* inj = std::get_if<InjectiveOnElements>(&c)) {
        injective_.push_back(inj->words);
      } else {
        surjective_ = true;
      }
    }
  }

  const std::vector<Membership>& memberships() const { return membership_; }

  bool membership_ok(const Membership& m, std::span<const Element> images) const {
    return m.mask[evaluate_word(group_, images, m.word)] != 0;
  }

  bool global_ok(std::span<const Element> images) const {
    for (const auto& ie : image_equals_) {
      std::vector<Element> gens;
      for (const auto& w : ie.generators) gens.push_back(evaluate_word(group_, images, w));
      if (!(subgroup_closure(group_, gens) == ie.subgroup)) return false;
    }
    std::vector<char> seen;
    for (const auto& words : injective_) {
      seen.assign(group_.order(), 0);
      for (const auto& w : words) {
        const Element v = evaluate_word(group_, images, w);
        if (seen[v]) return false;
        seen[v] = 1;
      }
    }
    if (surjective_ && subgroup_closure(group_, images).order() != group_.order()) return false;
    return true;
  }

 private:
  FiniteGroup group_;
  std::vector<Membership> membership_;
  std::vector<ImageEquals> image_equals_;
  std::vector<std::vector<Word>> injective_;
  bool surjective_ = false;
};

class Enumerator {
 public:
  Enumerator(const Presentation& p, const FiniteGroup& g, const ConstraintSet& c, EnumerationOptions opts)
      : p_(p), g_(g), constraints_(g, c), opts_(opts), m_(p.generator_count()) {
    if (p.coefficient_group && !p.coefficient_group->same_as(g) &&
        std::any_of(p.fixed_images.begin(), p.fixed_images.end(), [](const auto& f) { return f.has_value(); }))
      throw ForeignSubgroup("fixed images live in a different group than the target");
    for (const auto& r : p.relators)
      if (r.max_generator() >= std::int64_t(m_)) throw IndexOutOfRange("relator uses an undefined generator");
    candidates_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (p.is_fixed(i)) {
        g.check_index(*p.fixed_images[i]);
        candidates_[i] = {*p.fixed_images[i]};
      } else {
        candidates_[i].resize(g.order());
        for (Element x = 0; x < g.order(); ++x) candidates_[i][x] = x;
      }
    }
    check_fixed_relators();
    relators_at_.resize(m_ + 1);
    membership_at_.resize(m_ + 1);
    for (const auto& r : p.relators) relators_at_[std::size_t(r.max_generator() + 1)].push_back(&r);
    for (const auto& mem : constraints_.memberships())
      membership_at_[std::size_t(mem.word.max_generator() + 1)].push_back(&mem);
  }

  template <class Visit>
  void run(Visit&& visit) const {
    std::vector<Element> images(m_, 0);
    if (!level_ok(0, images)) return;
    if (m_ == 0) {
      if (leaf_ok(images)) visit(std::span<const Element>(images));
      return;
    }
    for (Element first : candidates_[0]) run_from(first, images, visit);
  }

  /// Per-candidate-of-generator-0 results, possibly computed in parallel, in
  /// candidate order.
  std::vector<std::vector<Element>> collect() const {
    std::vector<std::vector<Element>> out;
    auto append = [&](std::span<const Element> img) { out.emplace_back(img.begin(), img.end()); };
    if (opts_.workers <= 1 || m_ == 0) {
      run(append);
      return out;
    }
    std::vector<Element> probe(m_, 0);
    if (!level_ok(0, probe)) return out;
    const auto& first = candidates_[0];
    std::vector<std::vector<std::vector<Element>>> parts(first.size());
    run_parallel([&](std::size_t idx) {
      std::vector<Element> images(m_, 0);
      run_from(first[idx], images, [&](std::span<const Element> img) { parts[idx].emplace_back(img.begin(), img.end()); });
    }, first.size());
    for (auto& part : parts)
      for (auto& v : part) out.push_back(std::move(v));
    return out;
  }

  std::uint64_t count() const {
    if (opts_.workers <= 1 || m_ == 0) {
      std::uint64_t n = 0;
      run([&](std::span<const Element>) { ++n; });
      return n;
    }
    std::vector<Element> probe(m_, 0);
    if (!level_ok(0, probe)) return 0;
    const auto& first = candidates_[0];
    std::vector<std::uint64_t> parts(first.size(), 0);
    run_parallel([&](std::size_t idx) {
      std::vector<Element> images(m_, 0);
      run_from(first[idx], images, [&](std::span<const Element>) { ++parts[idx]; });
    }, first.size());
    std::uint64_t n = 0;
    for (auto v : parts) n += v;
    return n;
  }

 private:
  template <class Job>
  void run_parallel(Job&& job, std::size_t jobs) const {
    const std::size_t workers = std::min<std::size_t>(opts_.workers, jobs);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w)
      threads.emplace_back([&, w] {
        for (std::size_t idx = w; idx < jobs; idx += workers) job(idx);
      });
    for (auto& t : threads) t.join();
  }

  void check_fixed_relators() const {
    if (p_.fixed_images.empty()) return;
    std::vector<Element> images(m_, 0);
    for (std::size_t i = 0; i < m_; ++i)
      if (p_.is_fixed(i)) images[i] = *p_.fixed_images[i];
    for (const auto& r : p_.relators) {
      const bool only_fixed = std::all_of(r.letters.begin(), r.letters.end(), [&](const Letter& l) { return p_.is_fixed(l.generator); });
      if (only_fixed && evaluate_word(g_, images, r) != 0)
        throw ImpossibleFixedImage("relator " + format_word(r, p_.generators) + " fails on the fixed images");
    }
  }

  // Checks everything that becomes decidable once generators [0, level) are set.
  bool level_ok(std::size_t level, std::span<const Element> images) const {
    if (opts_.mode == EnumerationMode::Filter) return true;
    for (const Word* r : relators_at_[level])
      if (evaluate_word(g_, images, *r) != 0) return false;
    for (const auto* mem : membership_at_[level])
      if (!constraints_.membership_ok(*mem, images)) return false;
    return true;
  }

  bool leaf_ok(std::span<const Element> images) const {
    if (opts_.mode == EnumerationMode::Filter) {
      for (const auto& r : p_.relators)
        if (evaluate_word(g_, images, r) != 0) return false;
      for (const auto& mem : constraints_.memberships())
        if (!constraints_.membership_ok(mem, images)) return false;
    }
    return constraints_.global_ok(images);
  }

  template <class Visit>
  void run_from(Element first, std::vector<Element>& images, Visit&& visit) const {
    images[0] = first;
    descend(1, images, visit);
  }

  template <class Visit>
  void descend(std::size_t level, std::vector<Element>& images, Visit&& visit) const {
    if (!level_ok(level, images)) return;
    if (level == m_) {
      if (leaf_ok(images)) visit(std::span<const Element>(images));
      return;
    }
    for (Element x : candidates_[level]) {
      images[level] = x;
      descend(level + 1, images, visit);
    }
  }

  const Presentation& p_;
  FiniteGroup g_;
  CompiledConstraints constraints_;
  EnumerationOptions opts_;
  std::size_t m_;
  std::vector<std::vector<Element>> candidates_;
  std::vector<std::vector<const Word*>> relators_at_;
  std::vector<std::vector<const CompiledConstraints::Membership*>> membership_at_;
};

}  // namespace detail

/// All image tuples satisfying fixed images, relators and constraints, in
/// lexicographic order.
inline std::vector<std::vector<Element>> enumerate_images(const Presentation& p, const FiniteGroup& g,
                                                          const ConstraintSet& c = {}, EnumerationOptions opts = {}) {
  return detail::Enumerator(p, g, c, opts).collect();
}

inline std::uint64_t count_images(const Presentation& p, const FiniteGroup& g, const ConstraintSet& c = {},
                                  EnumerationOptions opts = {}) {
  return detail::Enumerator(p, g, c, opts).count();
}

/// A homomorphism from an indexed group into a finite group, stored as the
/// images of the generators.
class Hom {
 public:
  /// Verifies fixed images and relators; throws RelatorViolation otherwise.
  static Hom make(IndexedPresentation::Ptr p, FiniteGroup target, std::vector<Element> images) {
    if (images.size() != p->generator_count()) throw ParseError("image count does not match generator count");
    for (Element e : images) target.check_index(e);
    for (std::size_t i = 0; i < images.size(); ++i)
      if (auto f = p->fixed_image(i); f && *f != images[i])
        throw RelatorViolation("image of " + p->names()[i] + " differs from its fixed image");
    for (const auto& r : p->relators())
      if (evaluate_word(target, images, r) != 0)
        throw RelatorViolation("relator " + format_word(r, p->names()) + " is not satisfied");
    return Hom(std::move(p), std::move(target), std::move(images));
  }

  const IndexedPresentation::Ptr& presentation() const { return presentation_; }
  const FiniteGroup& target() const { return target_; }
  const std::vector<Element>& images() const { return images_; }

  Element evaluate(const Word& w) const { return evaluate_word(target_, images_, w); }
  Element of_degree_one() const { return evaluate(presentation_->degree_one_word()); }

  bool compatible_with(const Hom& other) const {
    return presentation_ == other.presentation_ && target_.same_as(other.target_);
  }

  friend bool operator==(const Hom& a, const Hom& b) { return a.compatible_with(b) && a.images_ == b.images_; }

 private:
  Hom(IndexedPresentation::Ptr p, FiniteGroup target, std::vector<Element> images)
      : presentation_(std::move(p)), target_(std::move(target)), images_(std::move(images)) {}

  friend std::vector<Hom> enumerate_homs(const IndexedPresentation::Ptr&, const FiniteGroup&, const ConstraintSet&,
                                         EnumerationOptions);
  friend Hom unchecked_hom(IndexedPresentation::Ptr, FiniteGroup, std::vector<Element>);

  IndexedPresentation::Ptr presentation_;
  FiniteGroup target_;
  std::vector<Element> images_;
};

/// Builds a Hom without verifying relators. Used for candidates that are
/// checked separately.
inline Hom unchecked_hom(IndexedPresentation::Ptr p, FiniteGroup target, std::vector<Element> images) {
  return Hom(std::move(p), std::move(target), std::move(images));
}

inline std::vector<Hom> enumerate_homs(const IndexedPresentation::Ptr& p, const FiniteGroup& g,
                                       const ConstraintSet& c = {}, EnumerationOptions opts = {}) {
  auto tuples = enumerate_images(p->presentation(), g, c, opts);
  std::vector<Hom> out;
  out.reserve(tuples.size());
  for (auto& t : tuples) out.push_back(Hom(p, g, std::move(t)));
  return out;
}

/// True iff the images satisfy every relator and fixed image.
inline bool satisfies_relators(const IndexedPresentation& p, const FiniteGroup& g, std::span<const Element> images) {
  for (std::size_t i = 0; i < images.size(); ++i)
    if (auto f = p.fixed_image(i); f && *f != images[i]) return false;
  return std::all_of(p.relators().begin(), p.relators().end(),
                     [&](const Word& r) { return evaluate_word(g, images, r) == 0; });
}

inline Subgroup image_subgroup(const Hom& phi) { return subgroup_closure(phi.target(), phi.images()); }

/// phi(ker deg): closure of phi(z_i) conjugated by phi(t)^k for k below the
/// order of phi(t).
inline Subgroup kernel_image(const Hom& phi) {
  const auto& g = phi.target();
  const Element t = phi.of_degree_one();
  const std::size_t period = g.element_order(t);
  std::vector<Element> gens;
  for (const auto& z : phi.presentation()->kernel_generator_words()) {
    Element u = phi.evaluate(z);
    for (std::size_t k = 0; k < period; ++k) {
      gens.push_back(u);
      u = g.conj(u, t);
    }
  }
  return subgroup_closure(g, gens);
}

}  // namespace homdiv
