#pragma once

/**
 * @file theorems.hpp
 * @brief Counting tasks over finite groups, each paired with the divisor the
 *        corresponding divisibility theorem predicts.
 *
 * Every task produces a DivisibilityReport. When the theorem's hypothesis
 * fails (for example a rank condition) the count is still computed and the
 * report carries theorem_applicable = false.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homdiv/errors.hpp"
#include "homdiv/group.hpp"
#include "homdiv/harness.hpp"
#include "homdiv/homomorphisms.hpp"
#include "homdiv/integer_matrix.hpp"
#include "homdiv/presentation.hpp"
#include "homdiv/subgroups.hpp"
#include "homdiv/word.hpp"

namespace homdiv {

struct HarnessOptions {
  bool enabled = false;
  /// Harness runs only when |Phi| does not exceed this.
  std::size_t max_homs = 500;
};

/// An extra divisor reported next to the main one (e.g. |Aut G|).
struct SupplementaryCheck {
  std::string description;
  std::uint64_t divisor = 1;
  bool divisible = true;
};

struct DivisibilityReport {
  std::uint64_t count = 0;
  std::uint64_t divisor = 1;
  std::string divisor_desc;
  bool divisible = true;
  std::optional<std::uint64_t> quotient;
  bool theorem_applicable = true;
  std::vector<SupplementaryCheck> supplementary;
  std::optional<HarnessReport> harness;
  /// Why the harness did not run, when it was requested but skipped.
  std::string harness_note;

  /// A counterexample to a proven statement: an applicable divisor that does
  /// not divide, or harness evidence contradicting the class structure.
  bool violation() const {
    if (theorem_applicable && !divisible) return true;
    for (const auto& s : supplementary)
      if (!s.divisible) return true;
    if (harness && harness->conditions_I_holds && harness->conditions_II_holds &&
        (!harness->all_classes_size_H || !harness->class_structure_holds ||
         harness->hom_count % harness->subgroup_order != 0))
      return true;
    return false;
  }
};

inline DivisibilityReport make_report(std::uint64_t count, std::uint64_t divisor, std::string desc, bool applicable) {
  DivisibilityReport r;
  r.count = count;
  r.divisor = divisor;
  r.divisor_desc = std::move(desc);
  r.divisible = divisor != 0 && count % divisor == 0;
  if (r.divisible) r.quotient = count / divisor;
  r.theorem_applicable = applicable;
  return r;
}

/// Derived subgroup of a subgroup A, as a subgroup of A's parent.
inline Subgroup derived_subgroup(const Subgroup& a) {
  const auto& g = a.parent();
  std::vector<Element> comms;
  for (Element x : a.elements())
    for (Element y : a.elements()) comms.push_back(g.commutator(x, y));
  std::sort(comms.begin(), comms.end());
  comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
  return subgroup_closure(g, comms);
}

// ---------------------------------------------------------------------------
// Equations over groups

/// Equations w = 1 over the alphabet x0..x{n-1} followed by named constants.
struct GroupEquationSystem {
  std::size_t unknowns = 0;
  std::vector<std::pair<std::string, Element>> constants;
  std::vector<Word> equations;

  std::vector<std::string> alphabet() const {
    auto names = Presentation::default_names(unknowns);
    for (const auto& c : constants) names.push_back(c.first);
    return names;
  }

  static GroupEquationSystem parse(std::size_t unknowns, std::vector<std::pair<std::string, Element>> constants,
                                   const std::vector<std::string>& equations) {
    GroupEquationSystem s;
    s.unknowns = unknowns;
    s.constants = std::move(constants);
    const auto names = s.alphabet();
    for (const auto& e : equations) s.equations.push_back(parse_word(e, names));
    return s;
  }

  std::vector<Element> constant_values() const {
    std::vector<Element> out;
    for (const auto& c : constants) out.push_back(c.second);
    return out;
  }

  Presentation presentation(const FiniteGroup& g) const {
    Presentation p;
    p.generators = alphabet();
    p.relators = equations;
    p.fixed_images.assign(p.generators.size(), std::nullopt);
    for (std::size_t i = 0; i < constants.size(); ++i) p.fixed_images[unknowns + i] = constants[i].second;
    p.coefficient_group = g;
    return p;
  }
};

/// Entry (j, i) is the exponent sum of unknown i in equation j.
inline IntMatrix exponent_matrix(const GroupEquationSystem& s) {
  IntMatrix m{s.unknowns, {}};
  const std::size_t width = s.unknowns + s.constants.size();
  for (const auto& eq : s.equations) {
    auto sums = eq.exponent_sums(width);
    sums.resize(s.unknowns);
    m.rows.push_back(std::move(sums));
  }
  return m;
}

namespace detail {

inline void attach_harness(DivisibilityReport& report, const HarnessOptions& opts, const std::vector<Hom>& homs,
                           const Subgroup& h) {
  if (!opts.enabled) return;
  if (homs.size() > opts.max_homs) {
    report.harness_note = "skipped: " + std::to_string(homs.size()) + " homomorphisms exceed the cap of " +
                          std::to_string(opts.max_homs);
    return;
  }
  report.harness = run_harness(homs, h);
}

}  // namespace detail

/// Solutions in G^n of every equation; divisor |C(constants)|.
inline DivisibilityReport count_equation_solutions(const FiniteGroup& g, const GroupEquationSystem& s,
                                                   HarnessOptions harness = {}, EnumerationOptions enumeration = {}) {
  for (const auto& c : s.constants) g.check_index(c.second);
  const bool applicable = integer_rank_and_kernel(exponent_matrix(s)).rank < s.unknowns;
  const auto p = s.presentation(g);
  std::uint64_t count = 0;
  bool impossible = false;
  try {
    count = count_images(p, g, {}, enumeration);
  } catch (const ImpossibleFixedImage&) {
    impossible = true;
  }
  const auto consts = s.constant_values();
  const Subgroup h = centralizer(g, consts);
  auto report = make_report(count, h.order(), "|C(coefficients)|", applicable);
  if (harness.enabled && applicable && !impossible) {
    auto indexed = IndexedPresentation::derive(p);
    detail::attach_harness(report, harness, enumerate_homs(indexed, g, {}, enumeration), h);
  } else if (harness.enabled) {
    report.harness_note = applicable ? "skipped: no solutions" : "skipped: rank hypothesis fails";
  }
  return report;
}

/// |{g : g^n in H}|; divisor |H|.
inline DivisibilityReport count_nth_roots(const FiniteGroup& g, const Subgroup& h, std::int64_t n) {
  if (!h.parent().same_as(g)) throw ForeignSubgroup("subgroup belongs to a different group");
  std::uint64_t count = 0;
  for (Element x = 0; x < g.order(); ++x)
    if (h.contains(g.pow(x, n))) ++count;
  return make_report(count, h.order(), "|H|", true);
}

/// Number of generating n-tuples via sum over subgroups of mu(H) |H|^n.
inline std::uint64_t hall_count(const FiniteGroup& g, std::int64_t n, std::size_t order_bound = kDefaultOrderBound) {
  if (n < 0) throw ParseError("hall_count needs n >= 0");
  const auto table = moebius_table(g, order_bound);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < table.subgroups.size(); ++i) {
    std::int64_t power = 1;
    for (std::int64_t k = 0; k < n; ++k) power = detail::checked_mul(power, std::int64_t(table.subgroups[i].order()));
    total = detail::checked_add(total, detail::checked_mul(table.mu[i], power));
  }
  return std::uint64_t(total);
}

// ---------------------------------------------------------------------------
// Theorem tasks

enum class TheoremKind {
  AllHoms,
  SubsetInSubgroup,
  DoubleCoset,
  NthRoots,
  EquationSystem,
  Epimorphisms,
  GeneratingTuples,
  ImageEquals,
  InjectiveRestriction,
};

inline const char* to_string(TheoremKind k) {
  switch (k) {
    case TheoremKind::AllHoms: return "all-homs";
    case TheoremKind::SubsetInSubgroup: return "subset-in-subgroup";
    case TheoremKind::DoubleCoset: return "double-coset";
    case TheoremKind::NthRoots: return "nth-roots";
    case TheoremKind::EquationSystem: return "group-equations";
    case TheoremKind::Epimorphisms: return "epimorphisms";
    case TheoremKind::GeneratingTuples: return "generating-tuples";
    case TheoremKind::ImageEquals: return "image-equals";
    case TheoremKind::InjectiveRestriction: return "injective-restriction";
  }
  return "?";
}

struct TheoremTask {
  TheoremKind kind = TheoremKind::AllHoms;
  FiniteGroup group = FiniteGroup::cyclic(1);
  /// F for every kind except NthRoots, EquationSystem and GeneratingTuples.
  IndexedPresentation::Ptr presentation;
  /// H (SubsetInSubgroup, DoubleCoset, NthRoots) or A (ImageEquals,
  /// InjectiveRestriction).
  std::optional<Subgroup> subgroup;
  /// W as words in F's generators.
  std::vector<Word> words;
  /// g_w per word of W (DoubleCoset).
  std::vector<Element> coset_representatives;
  /// Exponent (NthRoots) or tuple length (GeneratingTuples).
  std::int64_t n = 1;
  std::optional<GroupEquationSystem> equations;
  /// InjectiveRestriction: require phi(W) = A instead of phi(W) <= A.
  bool image_equal = false;
  HarnessOptions harness;
  EnumerationOptions enumeration;
  std::size_t order_bound = kDefaultOrderBound;
};

namespace detail {

inline const Subgroup& require_subgroup(const TheoremTask& t) {
  if (!t.subgroup) throw ParseError(std::string(to_string(t.kind)) + " needs a subgroup");
  if (!t.subgroup->parent().same_as(t.group)) throw ForeignSubgroup("task subgroup does not live in the task group");
  return *t.subgroup;
}

inline const IndexedPresentation::Ptr& require_presentation(const TheoremTask& t) {
  if (!t.presentation) throw ParseError(std::string(to_string(t.kind)) + " needs a presentation");
  return t.presentation;
}

inline DivisibilityReport count_with(const TheoremTask& t, const IndexedPresentation::Ptr& p, const ConstraintSet& c,
                                     const Subgroup& h, std::string desc, bool applicable = true) {
  const auto count = count_images(p->presentation(), t.group, c, t.enumeration);
  auto report = make_report(count, h.order(), std::move(desc), applicable);
  if (t.harness.enabled && applicable) {
    if (count > t.harness.max_homs)
      report.harness_note = "skipped: " + std::to_string(count) + " homomorphisms exceed the cap of " +
                            std::to_string(t.harness.max_homs);
    else
      report.harness = run_harness(enumerate_homs(p, t.group, c, t.enumeration), h);
  }
  return report;
}

}  // namespace detail

inline DivisibilityReport run_theorem_task(const TheoremTask& t) {
  const auto& g = t.group;
  switch (t.kind) {
    case TheoremKind::AllHoms: {
      const auto& p = detail::require_presentation(t);
      return detail::count_with(t, p, {}, Subgroup::whole(g), "|G|");
    }
    case TheoremKind::SubsetInSubgroup: {
      const auto& p = detail::require_presentation(t);
      const auto& h = detail::require_subgroup(t);
      return detail::count_with(t, p, {SubsetInSubgroup{t.words, h}}, h, "|H|");
    }
    case TheoremKind::DoubleCoset: {
      const auto& p = detail::require_presentation(t);
      const auto& h = detail::require_subgroup(t);
      if (t.coset_representatives.size() != t.words.size())
        throw ParseError("double-coset needs one representative per word");
      SubsetInDoubleCosets c;
      for (std::size_t i = 0; i < t.words.size(); ++i) c.targets.push_back({t.words[i], h, t.coset_representatives[i]});
      return detail::count_with(t, p, {std::move(c)}, h, "|H|");
    }
    case TheoremKind::NthRoots: {
      const auto& h = detail::require_subgroup(t);
      auto report = count_nth_roots(g, h, t.n);
      if (t.harness.enabled) {
        auto p = IndexedPresentation::free(1);
        const ConstraintSet c{SubsetInSubgroup{{Word::generator(0, t.n)}, h}};
        detail::attach_harness(report, t.harness, enumerate_homs(p, g, c, t.enumeration), h);
      }
      return report;
    }
    case TheoremKind::EquationSystem: {
      if (!t.equations) throw ParseError("group-equations needs an equation system");
      return count_equation_solutions(g, *t.equations, t.harness, t.enumeration);
    }
    case TheoremKind::Epimorphisms:
    case TheoremKind::GeneratingTuples: {
      IndexedPresentation::Ptr p;
      if (t.kind == TheoremKind::GeneratingTuples) {
        if (t.n < 1) throw ParseError("generating-tuples needs n >= 1");
        p = IndexedPresentation::free(std::size_t(t.n));
      } else {
        p = detail::require_presentation(t);
      }
      auto report = detail::count_with(t, p, {Surjective{}}, derived_subgroup(g), "|G'|");
      if (g.order() <= t.order_bound) {
        const auto aut = automorphism_count(g, t.order_bound);
        report.supplementary.push_back({"|Aut G|", aut, report.count % aut == 0});
      }
      return report;
    }
    case TheoremKind::ImageEquals: {
      const auto& p = detail::require_presentation(t);
      const auto& a = detail::require_subgroup(t);
      return detail::count_with(t, p, {ImageEquals{t.words, a}}, derived_subgroup(a), "|A'|");
    }
    case TheoremKind::InjectiveRestriction: {
      const auto& p = detail::require_presentation(t);
      const auto& a = detail::require_subgroup(t);
      if (!p->semidirect_data()) throw ParseError("injective-restriction needs a semidirect presentation");
      bool in_kernel = true;
      for (const auto& w : t.words) in_kernel = in_kernel && w.degree(p->degrees()) == 0;
      ConstraintSet c{InjectiveOnElements{t.words}};
      if (t.image_equal) c.push_back(ImageEquals{t.words, a});
      else c.push_back(SubsetInSubgroup{t.words, a});
      return detail::count_with(t, p, c, normalizer(g, a), "|N(A)|", in_kernel);
    }
  }
  throw ParseError("unknown theorem kind");
}

}  // namespace homdiv
